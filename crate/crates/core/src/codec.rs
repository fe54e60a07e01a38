//! Little-endian binary format shared by all sketch kinds.
//!
//! Layout: `"SSKB"`, version `1` (u8), kind code (u8), `m` (u32), `q` (u32),
//! `b` (f64), `a` (f64), then `m` registers as u32 (kinds 1, 2, 4) or `m`
//! components as f64 (kind 3). MinHash writes `q = 0`, `b = a = 1`. The lower
//! bound and the update counter are recomputed on decoding.

use crate::config::SketchConfig;
use crate::error::{Result, SketchError};
use crate::ghll::Ghll;
use crate::joint::{compare_registers, JointCounts, RegisterOrdering};
use crate::minhash::MinHash;
use crate::setsketch::{SetSketch, Variant};

const MAGIC: &[u8; 4] = b"SSKB";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 1 + 4 + 4 + 8 + 8;
const MINHASH_CODE: u8 = 3;
const GHLL_CODE: u8 = 4;

/// Any sketch that can be written in the common format.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySketch {
    SetSketch(SetSketch),
    Ghll(Ghll),
    MinHash(MinHash),
}

impl AnySketch {
    pub fn kind_name(&self) -> &'static str {
        match self {
            AnySketch::SetSketch(s) => match s.variant() {
                Variant::SetSketch1 => "setsketch1",
                Variant::SetSketch2 => "setsketch2",
            },
            AnySketch::Ghll(_) => "ghll",
            AnySketch::MinHash(_) => "minhash",
        }
    }

    pub fn insert(&mut self, element: u64) {
        match self {
            AnySketch::SetSketch(s) => s.insert(element),
            AnySketch::Ghll(s) => s.insert(element),
            AnySketch::MinHash(s) => s.insert(element),
        }
    }

    /// Empty sketch with the same parameters, sharing precomputed tables.
    pub fn new_empty_like(&self) -> Self {
        match self {
            AnySketch::SetSketch(s) => AnySketch::SetSketch(s.new_empty_like()),
            AnySketch::Ghll(s) => AnySketch::Ghll(s.new_empty_like()),
            AnySketch::MinHash(s) => AnySketch::MinHash(MinHash::new(s.m()).expect("m >= 1")),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            AnySketch::SetSketch(s) => s.config().m,
            AnySketch::Ghll(s) => s.config().m,
            AnySketch::MinHash(s) => s.m(),
        }
    }

    /// Inserts and returns the number of generated hash values.
    pub fn insert_counting(&mut self, element: u64) -> u32 {
        match self {
            AnySketch::SetSketch(s) => s.insert_counting(element),
            AnySketch::Ghll(s) => s.insert_counting(element),
            AnySketch::MinHash(s) => s.insert_counting(element),
        }
    }

    /// Register comparison counts, max-based for register sketches and
    /// min-based for MinHash.
    pub fn joint_counts(&self, other: &Self) -> Result<JointCounts> {
        match (self, other) {
            (AnySketch::SetSketch(a), AnySketch::SetSketch(b))
                if a.config() == b.config() && a.variant() == b.variant() =>
            {
                compare_registers(a.registers(), b.registers(), RegisterOrdering::MaxBased)
            }
            (AnySketch::Ghll(a), AnySketch::Ghll(b)) if a.config() == b.config() => {
                compare_registers(a.registers(), b.registers(), RegisterOrdering::MaxBased)
            }
            (AnySketch::MinHash(a), AnySketch::MinHash(b)) => {
                compare_registers(a.components(), b.components(), RegisterOrdering::MinBased)
            }
            _ if self.kind_name() == other.kind_name() => Err(SketchError::Incompatible(
                format!("{} sketches have different parameters", self.kind_name()),
            )),
            _ => Err(SketchError::Incompatible(format!(
                "cannot compare {} with {}",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AnySketch::SetSketch(a), AnySketch::SetSketch(b)) => {
                Ok(AnySketch::SetSketch(a.merge(b)?))
            }
            (AnySketch::Ghll(a), AnySketch::Ghll(b)) => Ok(AnySketch::Ghll(a.merge(b)?)),
            (AnySketch::MinHash(a), AnySketch::MinHash(b)) => Ok(AnySketch::MinHash(a.merge(b)?)),
            _ => Err(SketchError::Incompatible(format!(
                "cannot merge {} with {}",
                self.kind_name(),
                other.kind_name()
            ))),
        }
    }

    /// Default cardinality estimate of the kind: raw for SetSketch,
    /// corrected for GHLL, the MinHash estimator for MinHash.
    pub fn estimate(&self) -> Result<f64> {
        match self {
            AnySketch::SetSketch(s) => Ok(s.estimate_raw()),
            AnySketch::Ghll(s) => Ok(s.estimate_corrected()),
            AnySketch::MinHash(s) => s.estimate(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        match self {
            AnySketch::SetSketch(s) => {
                encode_registers(s.variant().code(), s.config(), s.registers())
            }
            AnySketch::Ghll(s) => encode_registers(GHLL_CODE, s.config(), s.registers()),
            AnySketch::MinHash(s) => {
                let mut out = header(MINHASH_CODE, s.m(), 0, 1.0, 1.0);
                for v in s.components() {
                    out.extend_from_slice(&v.to_le_bytes());
                }
                out
            }
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return format_error(format!("{} bytes is shorter than the header", bytes.len()));
        }
        if &bytes[0..4] != MAGIC {
            return format_error("bad magic");
        }
        if bytes[4] != VERSION {
            return format_error(format!("unsupported version {}", bytes[4]));
        }
        let code = bytes[5];
        let m = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
        let q = u32::from_le_bytes(bytes[10..14].try_into().unwrap());
        let b = f64::from_le_bytes(bytes[14..22].try_into().unwrap());
        let a = f64::from_le_bytes(bytes[22..30].try_into().unwrap());
        let body = &bytes[HEADER_LEN..];
        let width = if code == MINHASH_CODE { 8 } else { 4 };
        if body.len() != m * width {
            return format_error(format!(
                "expected {} payload bytes, got {}",
                m * width,
                body.len()
            ));
        }
        let as_format = |e: SketchError| SketchError::Format(e.to_string());
        match code {
            MINHASH_CODE => {
                let components = body
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect();
                Ok(AnySketch::MinHash(
                    MinHash::from_components(components).map_err(as_format)?,
                ))
            }
            GHLL_CODE => {
                let registers = decode_u32(body);
                let sketch = Ghll::from_registers(m, b, q, registers).map_err(as_format)?;
                if sketch.config().a != a {
                    return format_error(format!("GHLL rate must be 1/m, got {a}"));
                }
                Ok(AnySketch::Ghll(sketch))
            }
            _ => {
                let variant = Variant::from_code(code)
                    .ok_or_else(|| SketchError::Format(format!("unknown sketch kind {code}")))?;
                let config = SketchConfig::new(m, b, a, q).map_err(as_format)?;
                let sketch = SetSketch::from_registers(config, variant, decode_u32(body))
                    .map_err(as_format)?;
                Ok(AnySketch::SetSketch(sketch))
            }
        }
    }
}

fn format_error<T>(msg: impl Into<String>) -> Result<T> {
    Err(SketchError::Format(msg.into()))
}

fn header(code: u8, m: usize, q: u32, b: f64, a: f64) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * m);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(code);
    out.extend_from_slice(&(m as u32).to_le_bytes());
    out.extend_from_slice(&q.to_le_bytes());
    out.extend_from_slice(&b.to_le_bytes());
    out.extend_from_slice(&a.to_le_bytes());
    out
}

fn encode_registers(code: u8, config: &SketchConfig, registers: &[u32]) -> Vec<u8> {
    let mut out = header(code, config.m, config.q, config.b, config.a);
    for k in registers {
        out.extend_from_slice(&k.to_le_bytes());
    }
    out
}

fn decode_u32(body: &[u8]) -> Vec<u32> {
    body.chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect()
}

impl SetSketch {
    pub fn to_bytes(&self) -> Vec<u8> {
        encode_registers(self.variant().code(), self.config(), self.registers())
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        match AnySketch::from_bytes(bytes)? {
            AnySketch::SetSketch(s) => Ok(s),
            other => format_error(format!("expected a SetSketch, found {}", other.kind_name())),
        }
    }
}
