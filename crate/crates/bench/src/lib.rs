//! Shared fixtures for the benchmarks.

use setsketch::{split_seed, Ghll, MinHash, RandomStream, SetSketch, SketchConfig, Variant};

pub const M: usize = 256;

/// `n` random elements drawn from `seed`.
pub fn elements(n: usize, seed: u64) -> Vec<u64> {
    let mut s = RandomStream::from_seed(seed);
    (0..n).map(|_| s.next_u64()).collect()
}

pub fn setsketch(variant: Variant, b: f64, q: u32) -> SetSketch {
    SetSketch::new(SketchConfig::new(M, b, 20.0, q).unwrap(), variant).unwrap()
}

pub fn ghll(track_lower_bound: bool) -> Ghll {
    Ghll::new(M, 2.0, 62, track_lower_bound).unwrap()
}

pub fn minhash() -> MinHash {
    MinHash::new(M).unwrap()
}

/// Two SetSketch1 sketches of sets of size `n` sharing half their elements.
pub fn overlapping_pair(b: f64, q: u32, n: usize) -> (SetSketch, SetSketch) {
    let shared = elements(n / 2, split_seed(1, 0));
    let mut a = setsketch(Variant::SetSketch1, b, q);
    let mut c = a.new_empty_like();
    for &e in &shared {
        a.insert(e);
        c.insert(e);
    }
    for e in elements(n - n / 2, split_seed(1, 1)) {
        a.insert(e);
    }
    for e in elements(n - n / 2, split_seed(1, 2)) {
        c.insert(e);
    }
    (a, c)
}
