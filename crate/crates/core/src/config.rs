use crate::error::{invalid, Result};

/// Parameters shared by SetSketch and GHLL.
///
/// * `m` number of registers
/// * `b` base, `b > 1`
/// * `a` rate of the exponential hash values
/// * `q` largest regular register value; registers hold `0..=q+1`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SketchConfig {
    pub m: usize,
    pub b: f64,
    pub a: f64,
    pub q: u32,
}

impl SketchConfig {
    pub fn new(m: usize, b: f64, a: f64, q: u32) -> Result<Self> {
        let config = Self { m, b, a, q };
        config.check()?;
        Ok(config)
    }

    /// Structural validity: `m >= 1`, `b > 1`, `a > 0`, all finite.
    pub fn check(&self) -> Result<()> {
        if self.m == 0 || self.m > u32::MAX as usize {
            return invalid(format!("m must be in [1, 2^32), got {}", self.m));
        }
        if !(self.b > 1.0 && self.b.is_finite()) {
            return invalid(format!("base b must be finite and > 1, got {}", self.b));
        }
        if !(self.a > 0.0 && self.a.is_finite()) {
            return invalid(format!("rate a must be finite and > 0, got {}", self.a));
        }
        if self.q == u32::MAX {
            return invalid("q must be below 2^32 - 1");
        }
        Ok(())
    }

    /// Nominal footprint with `ceil(log2(q + 2))` bits per register.
    pub fn memory_bits(&self) -> u64 {
        let levels = u64::from(self.q) + 2;
        let bits = 64 - (levels - 1).leading_zeros();
        self.m as u64 * u64::from(bits)
    }

    /// Probability that a singleton set leaves some register below zero,
    /// assuming independent registers.
    pub fn negative_register_probability(&self) -> f64 {
        let per_register = (-self.a * self.b).exp();
        -(self.m as f64 * (-per_register).ln_1p()).exp_m1()
    }

    /// Probability that a set of cardinality `n` pushes some register above
    /// `q + 1`, assuming independent registers.
    pub fn overflow_probability(&self, n: f64) -> f64 {
        let log_rate =
            n.ln() + self.a.ln() + (self.m as f64).ln() - (f64::from(self.q) + 1.0) * self.b.ln();
        -(-log_rate.exp()).exp_m1()
    }

    /// Smallest admissible `a` and `q` for failure probability `epsilon`
    /// and cardinalities up to `n_max`.
    pub fn validate(&self, epsilon: f64, n_max: f64) -> Result<ValidationReport> {
        self.check()?;
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return invalid(format!("epsilon must be in (0, 1], got {epsilon}"));
        }
        if !(n_max >= 1.0 && n_max.is_finite()) {
            return invalid(format!("n_max must be >= 1, got {n_max}"));
        }
        let m = self.m as f64;
        let a_min = (m / epsilon).ln() / self.b;
        let q_min_real = (m * n_max * self.a / epsilon).ln() / self.b.ln();
        let q_min = q_min_real.floor().max(0.0);
        let ok = self.a >= a_min && f64::from(self.q) >= q_min;
        Ok(ValidationReport {
            a_min,
            q_min: q_min as u64,
            ok,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub a_min: f64,
    pub q_min: u64,
    pub ok: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_structurally_invalid() {
        assert!(SketchConfig::new(0, 2.0, 20.0, 62).is_err());
        assert!(SketchConfig::new(16, 1.0, 20.0, 62).is_err());
        assert!(SketchConfig::new(16, 2.0, 0.0, 62).is_err());
        assert!(SketchConfig::new(16, f64::NAN, 1.0, 62).is_err());
        assert!(SketchConfig::new(16, 2.0, 20.0, u32::MAX).is_err());
        assert!(SketchConfig::new(1, 1.0001, 1e-9, 0).is_ok());
    }

    #[test]
    fn memory_footprint() {
        assert_eq!(
            SketchConfig::new(4096, 1.001, 20.0, 65534)
                .unwrap()
                .memory_bits(),
            4096 * 16
        );
        assert_eq!(
            SketchConfig::new(256, 2.0, 20.0, 62).unwrap().memory_bits(),
            256 * 6
        );
        assert_eq!(
            SketchConfig::new(10, 2.0, 20.0, 0).unwrap().memory_bits(),
            10
        );
    }

    #[test]
    fn worked_two_byte_example() {
        let c = SketchConfig::new(4096, 1.001, 20.0, 65534).unwrap();
        let neg = c.negative_register_probability();
        let over = c.overflow_probability(1e18);
        assert!((neg - 8.28e-6).abs() < 0.005e-6, "{neg}");
        // The stated 2.93e-6 is reproduced to within half a unit of its last digit.
        assert!((over - 2.93e-6).abs() < 0.0051e-6, "{over}");
        let report = c.validate(1e-5, 1e18).unwrap();
        assert!(report.ok, "{report:?}");
        assert!(report.a_min <= 20.0);
        assert!(report.q_min <= 65534);
    }

    #[test]
    fn epsilon_one_needs_no_rate() {
        let c = SketchConfig::new(1, 2.0, 1e-6, 100).unwrap();
        let r = c.validate(1.0, 1.0).unwrap();
        assert_eq!(r.a_min, 0.0);
        assert!(c.a >= r.a_min);
    }

    #[test]
    fn rejects_bad_epsilon() {
        let c = SketchConfig::new(16, 2.0, 20.0, 62).unwrap();
        assert!(c.validate(0.0, 10.0).is_err());
        assert!(c.validate(1.5, 10.0).is_err());
        assert!(c.validate(0.1, 0.5).is_err());
    }

    #[test]
    fn small_q_fails_validation() {
        let c = SketchConfig::new(256, 2.0, 20.0, 10).unwrap();
        let r = c.validate(0.01, 1e6).unwrap();
        assert_eq!(r.q_min, 38);
        assert!(!r.ok);
    }
}
