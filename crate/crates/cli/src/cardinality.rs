//! Cardinality error curves.
//!
//! Each trial inserts one stream of random elements and estimates at every
//! grid cardinality on the way, so the grid points of a trial are nested
//! subsets rather than independent sets.

use rayon::prelude::*;
use setsketch::{split_seed, AnySketch, RandomStream};

use crate::error::{spec_error, Result};
use crate::output::{num, opt, CsvRecord};
use crate::sketch::{SketchKind, SketchParams};
use crate::stats::ErrorSummary;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardinalityEstimator {
    Raw,
    Corrected,
    MaxLikelihood,
    /// The estimator of MinHash components.
    MinHash,
}

impl CardinalityEstimator {
    pub fn name(self) -> &'static str {
        match self {
            CardinalityEstimator::Raw => "raw",
            CardinalityEstimator::Corrected => "corrected",
            CardinalityEstimator::MaxLikelihood => "ml",
            CardinalityEstimator::MinHash => "minhash",
        }
    }

    pub fn for_kind(kind: SketchKind) -> &'static [CardinalityEstimator] {
        use CardinalityEstimator::*;
        match kind {
            SketchKind::MinHash => &[MinHash],
            _ => &[Raw, Corrected, MaxLikelihood],
        }
    }

    fn apply(self, sketch: &AnySketch) -> f64 {
        use CardinalityEstimator::*;
        match (self, sketch) {
            (Raw, AnySketch::SetSketch(s)) => s.estimate_raw(),
            (Corrected, AnySketch::SetSketch(s)) => s.estimate_corrected(),
            (MaxLikelihood, AnySketch::SetSketch(s)) => s.estimate_ml(),
            (Raw, AnySketch::Ghll(s)) => s.estimate_raw(),
            (Corrected, AnySketch::Ghll(s)) => s.estimate_corrected(),
            (MaxLikelihood, AnySketch::Ghll(s)) => s.estimate_ml(),
            (MinHash, AnySketch::MinHash(s)) => s.estimate().unwrap_or(f64::INFINITY),
            _ => unreachable!("estimator chosen by for_kind"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardinalitySpec {
    pub sketch: SketchParams,
    pub trials: usize,
    pub seed: u64,
    /// Strictly increasing cardinalities, all at least 1.
    pub grid: Vec<u64>,
}

/// `count` cardinalities spaced evenly in `log10` over `[lo, hi]`, rounded
/// and deduplicated.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..count)
        .map(|i| {
            let t = if count == 1 {
                0.0
            } else {
                i as f64 / (count - 1) as f64
            };
            10f64
                .powf(lo.log10() + t * (hi.log10() - lo.log10()))
                .round() as u64
        })
        .collect();
    grid.dedup();
    grid
}

/// Eight cardinalities from 1 to `10^6`.
pub fn default_cardinality_grid() -> Vec<u64> {
    log_grid(1.0, 1e6, 8)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CardinalityRecord {
    pub sketch: &'static str,
    pub estimator: &'static str,
    pub m: usize,
    pub b: f64,
    pub a: f64,
    pub q: u32,
    pub true_n: u64,
    pub summary: ErrorSummary,
    pub theoretical_rsd: f64,
}

impl CsvRecord for CardinalityRecord {
    const HEADER: &'static [&'static str] = &[
        "sketch",
        "variant",
        "m",
        "b",
        "a",
        "q",
        "true_n",
        "trials",
        "rel_bias",
        "rel_rmse",
        "kurtosis",
        "theoretical_rsd",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.sketch.to_string(),
            self.estimator.to_string(),
            self.m.to_string(),
            num(self.b),
            num(self.a),
            self.q.to_string(),
            self.true_n.to_string(),
            self.summary.trials.to_string(),
            num(self.summary.rel_bias),
            num(self.summary.rel_rmse),
            opt(self.summary.kurtosis),
            num(self.theoretical_rsd),
        ]
    }
}

pub fn run_cardinality_experiment(spec: &CardinalitySpec) -> Result<Vec<CardinalityRecord>> {
    if spec.trials == 0 {
        return spec_error("trials must be at least 1");
    }
    if spec.grid.is_empty() || spec.grid[0] == 0 || spec.grid.windows(2).any(|w| w[0] >= w[1]) {
        return spec_error("grid must be nonempty, strictly increasing and start at 1 or more");
    }
    let n_max = *spec.grid.last().unwrap();
    let proto = spec.sketch.build(n_max)?;
    let config = spec.sketch.resolve(n_max)?;
    let estimators = CardinalityEstimator::for_kind(spec.sketch.kind);
    let width = estimators.len();

    // trial -> grid point -> estimator
    let per_trial: Vec<Vec<f64>> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut sketch = proto.new_empty_like();
            let mut elements = RandomStream::from_seed(split_seed(spec.seed, trial));
            let mut out = Vec::with_capacity(spec.grid.len() * width);
            let mut inserted = 0;
            for &n in &spec.grid {
                while inserted < n {
                    sketch.insert(elements.next_u64());
                    inserted += 1;
                }
                out.extend(estimators.iter().map(|e| e.apply(&sketch)));
            }
            out
        })
        .collect();

    let rsd = spec.sketch.theoretical_rsd()?;
    let mut records = Vec::new();
    for (gi, &n) in spec.grid.iter().enumerate() {
        for (ei, estimator) in estimators.iter().enumerate() {
            let column: Vec<f64> = per_trial.iter().map(|t| t[gi * width + ei]).collect();
            records.push(CardinalityRecord {
                sketch: spec.sketch.label(),
                estimator: estimator.name(),
                m: config.m,
                b: config.b,
                a: config.a,
                q: config.q,
                true_n: n,
                summary: ErrorSummary::from_estimates(&column, n as f64),
                theoretical_rsd: rsd,
            });
        }
    }
    Ok(records)
}
