use std::sync::Arc;

use crate::config::SketchConfig;
use crate::error::{Result, SketchError};
use crate::estimation::cardinality;
use crate::histogram::RegisterHistogram;
use crate::powers::PowerTable;
use crate::rng::RandomStream;

/// Register value range used by default: 6-bit registers for base 2 and
/// 2-byte registers otherwise.
pub fn default_q(b: f64) -> u32 {
    if b >= 2.0 {
        62
    } else {
        65534
    }
}

/// Generalized HyperLogLog with stochastic averaging.
///
/// Each element updates one register chosen uniformly, with value
/// `min(q+1, floor(1 - log_b u))` for a uniform `u` in `(0, 1)`. Its
/// registers are distributed like those of a SetSketch with `a = 1/m` once
/// no register is zero, so the sketch stores that configuration.
#[derive(Debug, Clone)]
pub struct Ghll {
    config: SketchConfig,
    registers: Vec<u32>,
    powers: Arc<PowerTable>,
    tracking: bool,
    lower_bound: u32,
    counter: usize,
}

impl PartialEq for Ghll {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config && self.registers == other.registers
    }
}

impl Ghll {
    /// Empty sketch; `track_lower_bound` enables skipping values that cannot
    /// change any register.
    pub fn new(m: usize, b: f64, q: u32, track_lower_bound: bool) -> Result<Self> {
        let config = SketchConfig::new(m, b, 1.0 / m as f64, q)?;
        Ok(Self {
            config,
            registers: vec![0; m],
            powers: Arc::new(PowerTable::new(b, q)),
            tracking: track_lower_bound,
            lower_bound: 0,
            counter: 0,
        })
    }

    pub fn new_empty_like(&self) -> Self {
        Self {
            config: self.config,
            registers: vec![0; self.config.m],
            powers: Arc::clone(&self.powers),
            tracking: self.tracking,
            lower_bound: 0,
            counter: 0,
        }
    }

    pub fn from_registers(m: usize, b: f64, q: u32, registers: Vec<u32>) -> Result<Self> {
        let mut sketch = Self::new(m, b, q, true)?;
        if registers.len() != m {
            return crate::error::invalid(format!(
                "expected {m} registers, got {}",
                registers.len()
            ));
        }
        if let Some(&k) = registers.iter().find(|&&k| k > q + 1) {
            return crate::error::invalid(format!("register value {k} exceeds q+1 = {}", q + 1));
        }
        sketch.registers = registers;
        sketch.refresh_lower_bound();
        Ok(sketch)
    }

    pub fn clear(&mut self) {
        self.registers.fill(0);
        self.lower_bound = 0;
        self.counter = 0;
    }

    /// Configuration with `a = 1/m`.
    pub fn config(&self) -> &SketchConfig {
        &self.config
    }

    pub fn registers(&self) -> &[u32] {
        &self.registers
    }

    pub fn tracks_lower_bound(&self) -> bool {
        self.tracking
    }

    pub fn lower_bound(&self) -> u32 {
        self.lower_bound
    }

    pub fn insert(&mut self, element: u64) {
        self.insert_counting(element);
    }

    /// Inserts and returns the number of register accesses (0 or 1).
    pub fn insert_counting(&mut self, element: u64) -> u32 {
        let mut stream = RandomStream::from_seed(element);
        let u = stream.next_open_uniform();
        if self.tracking && u > self.powers.get(self.lower_bound) {
            return 0;
        }
        let i = stream.next_below(self.config.m as u64) as usize;
        let k = self.powers.update_value(u);
        if k > self.registers[i] {
            self.registers[i] = k;
            if self.tracking {
                self.counter += 1;
                if self.counter >= self.config.m {
                    self.refresh_lower_bound();
                }
            }
        }
        1
    }

    fn refresh_lower_bound(&mut self) {
        self.lower_bound = *self.registers.iter().min().expect("m >= 1");
        self.counter = 0;
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut merged = self.clone();
        merged.merge_from(other)?;
        Ok(merged)
    }

    pub fn merge_from(&mut self, other: &Self) -> Result<()> {
        if self.config != other.config {
            return Err(SketchError::Incompatible(format!(
                "{:?} vs {:?}",
                self.config, other.config
            )));
        }
        for (k, &o) in self.registers.iter_mut().zip(&other.registers) {
            *k = (*k).max(o);
        }
        self.refresh_lower_bound();
        Ok(())
    }

    pub fn histogram(&self) -> RegisterHistogram {
        RegisterHistogram::from_registers(&self.registers, self.config.q)
    }

    pub fn estimate_raw(&self) -> f64 {
        cardinality::raw_from_power_sum(&self.config, self.powers.power_sum(&self.registers))
    }

    pub fn estimate_corrected(&self) -> f64 {
        cardinality::estimate_cardinality_corrected(&self.histogram(), &self.config)
            .expect("histogram of a valid sketch")
    }

    pub fn estimate_ml(&self) -> f64 {
        cardinality::estimate_cardinality_ml(&self.histogram(), &self.config)
            .expect("histogram of a valid sketch")
    }
}

/// Whether joint estimation from two GHLL sketches is meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    Ok,
    /// Some register is 0 in both or `q+1` in both; fall back to
    /// inclusion-exclusion.
    FallbackRequired,
}

pub fn ghll_applicability(a: &Ghll, b: &Ghll) -> Result<Applicability> {
    if a.config != b.config {
        return Err(SketchError::Incompatible(format!(
            "{:?} vs {:?}",
            a.config, b.config
        )));
    }
    let top = a.config.q + 1;
    let blocked = a
        .registers
        .iter()
        .zip(&b.registers)
        .any(|(&x, &y)| x == y && (x == 0 || x == top));
    Ok(if blocked {
        Applicability::FallbackRequired
    } else {
        Applicability::Ok
    })
}
