use crate::error::{invalid, Result};

/// Descending table of `b^-k` for `k = 0..=q+1`.
///
/// Register update values `max(0, min(q+1, floor(1 - log_b x)))` are found by
/// binary search over this table instead of evaluating a logarithm. The
/// convention is `floor(1 - log_b x) >= k  <=>  x <= b^-(k-1)`, with table
/// entries computed once by `powf`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTable {
    powers: Vec<f64>,
}

impl PowerTable {
    pub fn new(b: f64, q: u32) -> Self {
        let powers = (0..=u64::from(q) + 1)
            .map(|k| b.powf(-(k as f64)))
            .collect();
        Self { powers }
    }

    /// `b^-k`.
    #[inline]
    pub fn get(&self, k: u32) -> f64 {
        self.powers[k as usize]
    }

    /// Largest representable register value `q + 1`.
    #[inline]
    pub fn max_value(&self) -> u32 {
        (self.powers.len() - 1) as u32
    }

    /// Clamped update value for a positive point.
    #[inline]
    pub fn update_value(&self, x: f64) -> u32 {
        if x > self.powers[0] {
            0
        } else {
            self.update_value_above(x, 0)
        }
    }

    /// Checked variant of [`update_value`](Self::update_value).
    pub fn update_value_for_point(&self, x: f64) -> Result<u32> {
        if x.is_nan() || x <= 0.0 {
            return invalid(format!("point must be positive, got {x}"));
        }
        Ok(self.update_value(x))
    }

    /// Update value for a point already known to satisfy `x <= b^-lower`.
    ///
    /// The search only covers exponents above `lower`; the result is at least
    /// `lower + 1` unless `lower` is already `q + 1`.
    #[inline]
    pub fn update_value_above(&self, x: f64, lower: u32) -> u32 {
        let q = self.max_value() - 1;
        if lower > q {
            return q + 1;
        }
        debug_assert!(x <= self.powers[lower as usize]);
        let window = &self.powers[lower as usize..=q as usize];
        lower + window.partition_point(|&p| p >= x) as u32
    }

    /// `sum_i b^-K_i` over a register slice.
    pub fn power_sum(&self, registers: &[u32]) -> f64 {
        registers.iter().map(|&k| self.powers[k as usize]).sum()
    }
}
