use crate::error::{invalid, Result, SketchError};
use crate::estimation::cardinality;
use crate::rng::RandomStream;

/// MinHash with `m` double-precision components.
///
/// Component `i` of an element is the `i`-th open uniform of the element's
/// stream, so the same element yields the same vector in every sketch.
#[derive(Debug, Clone, PartialEq)]
pub struct MinHash {
    components: Vec<f64>,
}

impl MinHash {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > u32::MAX as usize {
            return invalid(format!("m must be in [1, 2^32), got {m}"));
        }
        Ok(Self {
            components: vec![1.0; m],
        })
    }

    pub fn from_components(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return invalid("MinHash needs at least one component");
        }
        if let Some(v) = components.iter().find(|v| !(**v > 0.0 && **v <= 1.0)) {
            return invalid(format!("component {v} outside (0, 1]"));
        }
        Ok(Self { components })
    }

    pub fn m(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn clear(&mut self) {
        self.components.fill(1.0);
    }

    pub fn insert(&mut self, element: u64) {
        let mut stream = RandomStream::from_seed(element);
        for v in &mut self.components {
            let u = stream.next_open_uniform();
            if u < *v {
                *v = u;
            }
        }
    }

    /// Inserts and returns the number of component evaluations, always `m`.
    pub fn insert_counting(&mut self, element: u64) -> u32 {
        self.insert(element);
        self.components.len() as u32
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut merged = self.clone();
        merged.merge_from(other)?;
        Ok(merged)
    }

    pub fn merge_from(&mut self, other: &Self) -> Result<()> {
        if self.m() != other.m() {
            return Err(SketchError::Incompatible(format!(
                "m = {} vs {}",
                self.m(),
                other.m()
            )));
        }
        for (v, &o) in self.components.iter_mut().zip(&other.components) {
            *v = v.min(o);
        }
        Ok(())
    }

    /// Fraction of equal components, the classic Jaccard estimate.
    pub fn matching_fraction(&self, other: &Self) -> Result<f64> {
        if self.m() != other.m() {
            return Err(SketchError::Incompatible(format!(
                "m = {} vs {}",
                self.m(),
                other.m()
            )));
        }
        let equal = self
            .components
            .iter()
            .zip(&other.components)
            .filter(|(a, b)| a == b)
            .count();
        Ok(equal as f64 / self.m() as f64)
    }

    /// `m / sum_i -ln(1 - V_i)`; fails if a component was never updated.
    pub fn estimate(&self) -> Result<f64> {
        cardinality::estimate_cardinality_mh(&self.components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_components_are_one() {
        let mh = MinHash::new(8).unwrap();
        assert!(mh.components().iter().all(|&v| v == 1.0));
        assert!(mh.estimate().is_err());
    }

    #[test]
    fn idempotent_commutative_and_nonincreasing() {
        let mut a = MinHash::new(16).unwrap();
        let mut b = MinHash::new(16).unwrap();
        let mut prev = a.clone();
        for e in 0..200u64 {
            a.insert(e);
            a.insert(e);
            assert!(a
                .components()
                .iter()
                .zip(prev.components())
                .all(|(x, y)| x <= y));
            prev = a.clone();
        }
        for e in (0..200u64).rev() {
            b.insert(e);
        }
        assert_eq!(a, b);
    }

    #[test]
    fn merge_is_min() {
        let mut a = MinHash::new(16).unwrap();
        let mut b = MinHash::new(16).unwrap();
        let mut u = MinHash::new(16).unwrap();
        for e in 0..100u64 {
            a.insert(e);
            u.insert(e);
        }
        for e in 50..300u64 {
            b.insert(e);
            u.insert(e);
        }
        assert_eq!(a.merge(&b).unwrap(), u);
        assert!(a.merge(&MinHash::new(8).unwrap()).is_err());
    }

    #[test]
    fn identical_sets_match_fully() {
        let mut a = MinHash::new(32).unwrap();
        for e in 0..10u64 {
            a.insert(e);
        }
        assert_eq!(a.matching_fraction(&a.clone()).unwrap(), 1.0);
    }
}
