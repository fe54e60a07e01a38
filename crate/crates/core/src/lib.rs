//! SetSketch: a mergeable set summary between MinHash and HyperLogLog.
//!
//! The crate provides SetSketch (both point-generation variants), MinHash and
//! generalized HyperLogLog sketches, cardinality estimators, and joint
//! estimators for Jaccard similarity and the quantities derived from it.
//!
//! ```
//! use setsketch::{SetSketch, SketchConfig, Variant};
//!
//! let config = SketchConfig::new(256, 2.0, 20.0, 62).unwrap();
//! let mut a = SetSketch::new(config, Variant::SetSketch1).unwrap();
//! let mut b = a.new_empty_like();
//! for e in 0..10_000u64 {
//!     a.insert(e);
//!     b.insert(e + 5_000);
//! }
//! let estimate = setsketch::estimate_joint(&a, &b).unwrap();
//! assert!((estimate.jaccard - 1.0 / 3.0).abs() < 0.1);
//! ```

pub mod codec;
pub mod config;
pub mod error;
pub mod estimation;
pub mod ghll;
pub mod histogram;
pub mod joint;
pub mod minhash;
pub mod powers;
pub mod rng;
pub mod setsketch;

pub use codec::AnySketch;
pub use config::{SketchConfig, ValidationReport};
pub use error::{Result, SketchError};
pub use estimation::cardinality::{
    estimate_cardinality_corrected, estimate_cardinality_mh, estimate_cardinality_ml,
    estimate_cardinality_raw, rsd_theoretical,
};
pub use estimation::joint::{
    collision_probability_bounds, estimate_jaccard_inclusion_exclusion,
    estimate_jaccard_lsh_bounds, estimate_jaccard_mh_closed_form, estimate_jaccard_ml,
    fisher_information_joint, fisher_information_limit, fisher_rmse, jaccard_upper_limit,
    log_likelihood_joint, relative_cardinalities, DerivedJointQuantities, JointEstimate, Quantity,
};
pub use estimation::special::{p_b, SpecialFunctions};
pub use ghll::{default_q, ghll_applicability, Applicability, Ghll};
pub use histogram::RegisterHistogram;
pub use joint::{compare_registers, JointCounts, RegisterOrdering};
pub use minhash::MinHash;
pub use powers::PowerTable;
pub use rng::{split_seed, PermutationSampler, RandomStream};
pub use setsketch::{IntervalBoundaries, SetSketch, Variant};

/// Joint estimate from two SetSketches with estimated cardinalities.
pub fn estimate_joint(a: &SetSketch, b: &SetSketch) -> Result<JointEstimate> {
    let counts = compare_registers(a.registers(), b.registers(), RegisterOrdering::MaxBased)?;
    if a.config() != b.config() {
        return Err(SketchError::Incompatible("configurations differ".into()));
    }
    let (n_a, n_b) = (a.estimate_raw(), b.estimate_raw());
    let j = estimate_jaccard_ml(&counts, n_a, n_b, a.config().b)?;
    JointEstimate::new(n_a, n_b, j)
}
