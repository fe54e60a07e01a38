//! Synthetic sets of random 64-bit integers.

use setsketch::RandomStream;

use crate::error::{spec_error, Result};

pub fn generate_set(n: usize, stream: &mut RandomStream) -> Vec<u64> {
    (0..n).map(|_| stream.next_u64()).collect()
}

/// Sizes of the three disjoint parts `S1`, `S2`, `S3` of a pair
/// `A = S1 + S3`, `B = S2 + S3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairSizes {
    pub n1: usize,
    pub n2: usize,
    pub n3: usize,
}

impl PairSizes {
    pub fn new(n1: usize, n2: usize, n3: usize) -> Result<Self> {
        if n1 + n3 == 0 || n2 + n3 == 0 {
            return spec_error(format!(
                "both sets must be nonempty, got ({n1}, {n2}, {n3})"
            ));
        }
        Ok(Self { n1, n2, n3 })
    }

    /// Sizes for a union of `union` elements with Jaccard similarity
    /// `jaccard` and `|A\B| / |B\A| = ratio`, rounded to integers.
    pub fn from_union(union: usize, jaccard: f64, ratio: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&jaccard) {
            return spec_error(format!("jaccard must be in [0, 1], got {jaccard}"));
        }
        if !(ratio > 0.0 && ratio.is_finite()) {
            return spec_error(format!("ratio must be positive, got {ratio}"));
        }
        let n3 = (jaccard * union as f64).round() as usize;
        let rest = union - n3.min(union);
        let n1 = (rest as f64 * ratio / (1.0 + ratio)).round() as usize;
        Self::new(n1, rest - n1, n3)
    }

    pub fn n_a(&self) -> usize {
        self.n1 + self.n3
    }

    pub fn n_b(&self) -> usize {
        self.n2 + self.n3
    }

    pub fn union(&self) -> usize {
        self.n1 + self.n2 + self.n3
    }

    pub fn jaccard(&self) -> f64 {
        self.n3 as f64 / self.union() as f64
    }
}

/// The three parts drawn in the order `S1`, `S2`, `S3`.
pub fn generate_parts(sizes: PairSizes, stream: &mut RandomStream) -> [Vec<u64>; 3] {
    let s1 = generate_set(sizes.n1, stream);
    let s2 = generate_set(sizes.n2, stream);
    let s3 = generate_set(sizes.n3, stream);
    [s1, s2, s3]
}

pub fn generate_pair(sizes: PairSizes, stream: &mut RandomStream) -> (Vec<u64>, Vec<u64>) {
    let [s1, s2, s3] = generate_parts(sizes, stream);
    let a = s1.into_iter().chain(s3.iter().copied()).collect();
    let b = s2.into_iter().chain(s3).collect();
    (a, b)
}
