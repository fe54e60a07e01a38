use std::fmt;

use setsketch::{
    default_q, rsd_theoretical, AnySketch, Ghll, MinHash, SetSketch, SketchConfig, Variant,
};

use crate::error::{spec_error, Result};

/// Failure probability used to pick `q` when none is given.
pub const DEFAULT_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum SketchKind {
    #[value(name = "setsketch1")]
    SetSketch1,
    #[value(name = "setsketch2")]
    SetSketch2,
    Ghll,
    #[value(name = "minhash")]
    MinHash,
}

impl SketchKind {
    pub const ALL: [SketchKind; 4] = [
        SketchKind::SetSketch1,
        SketchKind::SetSketch2,
        SketchKind::Ghll,
        SketchKind::MinHash,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SketchKind::SetSketch1 => "setsketch1",
            SketchKind::SetSketch2 => "setsketch2",
            SketchKind::Ghll => "ghll",
            SketchKind::MinHash => "minhash",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for SketchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Sketch kind plus configuration. `a` is ignored for GHLL (always `1/m`);
/// `b`, `a` and `q` are ignored for MinHash. Without `q`, SetSketch uses the
/// smallest value that keeps overflow below [`DEFAULT_EPSILON`] for the
/// largest cardinality of the experiment and GHLL uses [`default_q`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchParams {
    pub kind: SketchKind,
    pub m: usize,
    pub b: f64,
    pub a: f64,
    pub q: Option<u32>,
    /// GHLL only; SetSketch always tracks its lower bound.
    pub ghll_lower_bound: bool,
}

impl SketchParams {
    pub fn new(kind: SketchKind, m: usize, b: f64, a: f64) -> Self {
        Self {
            kind,
            m,
            b,
            a,
            q: None,
            ghll_lower_bound: true,
        }
    }

    pub fn with_q(mut self, q: u32) -> Self {
        self.q = Some(q);
        self
    }

    /// Label for output: the kind name, marking GHLL without tracking.
    pub fn label(&self) -> &'static str {
        match (self.kind, self.ghll_lower_bound) {
            (SketchKind::Ghll, false) => "ghll-untracked",
            (kind, _) => kind.name(),
        }
    }

    /// Effective `(m, b, a, q)`; MinHash reports `b = a = 1`, `q = 0`.
    pub fn resolve(&self, n_max: u64) -> Result<SketchConfig> {
        if self.m == 0 {
            return spec_error("m must be at least 1");
        }
        match self.kind {
            SketchKind::MinHash => Ok(SketchConfig {
                m: self.m,
                b: 1.0,
                a: 1.0,
                q: 0,
            }),
            SketchKind::Ghll => {
                let q = self.q.unwrap_or_else(|| default_q(self.b));
                Ok(SketchConfig::new(self.m, self.b, 1.0 / self.m as f64, q)?)
            }
            SketchKind::SetSketch1 | SketchKind::SetSketch2 => {
                let q = match self.q {
                    Some(q) => q,
                    None => {
                        let probe = SketchConfig::new(self.m, self.b, self.a, 0)?;
                        let report = probe.validate(DEFAULT_EPSILON, n_max.max(1) as f64)?;
                        if report.q_min >= u64::from(u32::MAX) {
                            return spec_error(format!(
                                "base {} needs q = {}",
                                self.b, report.q_min
                            ));
                        }
                        report.q_min as u32
                    }
                };
                Ok(SketchConfig::new(self.m, self.b, self.a, q)?)
            }
        }
    }

    /// Empty sketch suitable for cardinalities up to `n_max`.
    pub fn build(&self, n_max: u64) -> Result<AnySketch> {
        let config = self.resolve(n_max)?;
        Ok(match self.kind {
            SketchKind::SetSketch1 => {
                AnySketch::SetSketch(SetSketch::new(config, Variant::SetSketch1)?)
            }
            SketchKind::SetSketch2 => {
                AnySketch::SetSketch(SetSketch::new(config, Variant::SetSketch2)?)
            }
            SketchKind::Ghll => AnySketch::Ghll(Ghll::new(
                config.m,
                config.b,
                config.q,
                self.ghll_lower_bound,
            )?),
            SketchKind::MinHash => AnySketch::MinHash(MinHash::new(config.m)?),
        })
    }

    /// Asymptotic relative standard error of the cardinality estimate.
    pub fn theoretical_rsd(&self) -> Result<f64> {
        match self.kind {
            SketchKind::MinHash => Ok(1.0 / (self.m as f64).sqrt()),
            _ => Ok(rsd_theoretical(self.b, self.m)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_q_comes_from_validation() {
        let p = SketchParams::new(SketchKind::SetSketch1, 256, 2.0, 20.0);
        // log2(256 * 1e6 * 20 / 1e-6) = 52.19
        assert_eq!(p.resolve(1_000_000).unwrap().q, 52);
        assert_eq!(p.with_q(62).resolve(1_000_000).unwrap().q, 62);
        let g = SketchParams::new(SketchKind::Ghll, 256, 2.0, 20.0)
            .resolve(10)
            .unwrap();
        assert_eq!((g.a, g.q), (1.0 / 256.0, 62));
    }

    #[test]
    fn names_round_trip() {
        for k in SketchKind::ALL {
            assert_eq!(SketchKind::parse(k.name()), Some(k));
        }
        assert_eq!(SketchKind::parse("hll"), None);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SketchParams::new(SketchKind::SetSketch2, 0, 2.0, 20.0)
            .build(10)
            .is_err());
        assert!(SketchParams::new(SketchKind::SetSketch2, 16, 1.0, 20.0)
            .build(10)
            .is_err());
        assert!(SketchParams::new(SketchKind::Ghll, 16, -2.0, 20.0)
            .build(10)
            .is_err());
    }
}
