use crate::error::{invalid, Result};

/// Register comparison counts `(D+, D-, D0)` between sketches of A and B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointCounts {
    pub d_plus: u64,
    pub d_minus: u64,
    pub d_zero: u64,
}

impl JointCounts {
    pub fn new(d_plus: u64, d_minus: u64, d_zero: u64) -> Result<Self> {
        if d_plus + d_minus + d_zero == 0 {
            return invalid("joint counts must not all be zero");
        }
        Ok(Self {
            d_plus,
            d_minus,
            d_zero,
        })
    }

    /// Number of registers `m`.
    pub fn m(&self) -> u64 {
        self.d_plus + self.d_minus + self.d_zero
    }

    /// Counts for the arguments in reverse order.
    pub fn swapped(&self) -> Self {
        Self {
            d_plus: self.d_minus,
            d_minus: self.d_plus,
            d_zero: self.d_zero,
        }
    }
}

/// Which direction counts as "A ahead of B".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterOrdering {
    /// SetSketch and GHLL: `D+` counts `K_A > K_B`.
    MaxBased,
    /// MinHash: `D+` counts `V_A < V_B`.
    MinBased,
}

pub fn compare_registers<T: PartialOrd>(
    a: &[T],
    b: &[T],
    ordering: RegisterOrdering,
) -> Result<JointCounts> {
    if a.len() != b.len() {
        return invalid(format!(
            "register counts differ: {} vs {}",
            a.len(),
            b.len()
        ));
    }
    if a.is_empty() {
        return invalid("cannot compare empty register arrays");
    }
    let (mut greater, mut less) = (0u64, 0u64);
    for (x, y) in a.iter().zip(b) {
        if x > y {
            greater += 1;
        } else if x < y {
            less += 1;
        }
    }
    let d_zero = a.len() as u64 - greater - less;
    Ok(match ordering {
        RegisterOrdering::MaxBased => JointCounts {
            d_plus: greater,
            d_minus: less,
            d_zero,
        },
        RegisterOrdering::MinBased => JointCounts {
            d_plus: less,
            d_minus: greater,
            d_zero,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_count() {
        let c =
            compare_registers(&[3u32, 1, 2, 2], &[1, 1, 2, 3], RegisterOrdering::MaxBased).unwrap();
        assert_eq!(
            c,
            JointCounts {
                d_plus: 1,
                d_minus: 1,
                d_zero: 2
            }
        );
    }

    #[test]
    fn min_based_reverses_direction() {
        let c = compare_registers(
            &[0.1, 0.5, 0.3],
            &[0.2, 0.4, 0.3],
            RegisterOrdering::MinBased,
        )
        .unwrap();
        assert_eq!(
            c,
            JointCounts {
                d_plus: 1,
                d_minus: 1,
                d_zero: 1
            }
        );
        let c = compare_registers(&[0.1, 0.2], &[0.3, 0.4], RegisterOrdering::MinBased).unwrap();
        assert_eq!((c.d_plus, c.d_minus), (2, 0));
    }

    #[test]
    fn identical_and_swapped() {
        let a = [4u32, 0, 9];
        let b = [1u32, 0, 12];
        assert_eq!(
            compare_registers(&a, &a, RegisterOrdering::MaxBased).unwrap(),
            JointCounts::new(0, 0, 3).unwrap()
        );
        let ab = compare_registers(&a, &b, RegisterOrdering::MaxBased).unwrap();
        let ba = compare_registers(&b, &a, RegisterOrdering::MaxBased).unwrap();
        assert_eq!(ab.swapped(), ba);
    }

    #[test]
    fn rejects_size_mismatch() {
        assert!(compare_registers(&[1u32, 2], &[1], RegisterOrdering::MaxBased).is_err());
        assert!(compare_registers::<u32>(&[], &[], RegisterOrdering::MaxBased).is_err());
    }
}
