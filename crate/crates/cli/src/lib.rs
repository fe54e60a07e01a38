//! Experiment harness for SetSketch, GHLL and MinHash.
//!
//! Every experiment takes a spec with an explicit seed and returns records
//! that serialize to CSV. Trial `t` draws from `split_seed(seed, t)`, and
//! results are aggregated in trial order, so output does not depend on the
//! number of threads.

pub mod audit;
pub mod cardinality;
pub mod data;
pub mod error;
pub mod files;
pub mod joint;
pub mod output;
pub mod sketch;
pub mod stats;
pub mod throughput;

pub use audit::{audit_passed, run_special_function_audit, AuditRecord};
pub use cardinality::{
    default_cardinality_grid, log_grid, run_cardinality_experiment, CardinalityEstimator,
    CardinalityRecord, CardinalitySpec,
};
pub use data::{generate_pair, generate_set, PairSizes};
pub use error::{HarnessError, Result};
pub use joint::{
    default_jaccard_grid, default_ratio_grid, run_joint_experiment, JointEstimator, JointRecord,
    JointSpec,
};
pub use output::{to_csv_string, write_csv, CsvRecord};
pub use sketch::{SketchKind, SketchParams};
pub use stats::ErrorSummary;
pub use throughput::{run_throughput_benchmark, ThroughputRecord, ThroughputSpec};
