use crate::error::{invalid, Result};

/// Counts `C_k` of registers holding value `k`, for `k = 0..=q+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterHistogram {
    counts: Vec<u64>,
}

impl RegisterHistogram {
    /// Histogram of `registers`, all of which must be at most `q + 1`.
    pub fn from_registers(registers: &[u32], q: u32) -> Self {
        let mut counts = vec![0u64; q as usize + 2];
        for &k in registers {
            counts[k as usize] += 1;
        }
        Self { counts }
    }

    /// Wraps raw counts; there must be `q + 2` of them with a positive sum.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return invalid("histogram needs at least the levels 0 and q+1");
        }
        if counts.iter().sum::<u64>() == 0 {
            return invalid("histogram is empty");
        }
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of registers `m`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Largest regular value `q`.
    pub fn q(&self) -> u32 {
        (self.counts.len() - 2) as u32
    }

    pub fn zeros(&self) -> u64 {
        self.counts[0]
    }

    pub fn saturated(&self) -> u64 {
        self.counts[self.counts.len() - 1]
    }
}
