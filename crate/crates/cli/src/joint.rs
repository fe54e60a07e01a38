//! Joint-estimation error curves over Jaccard similarity and size ratio.

use rayon::prelude::*;
use setsketch::{
    estimate_jaccard_inclusion_exclusion, estimate_jaccard_mh_closed_form, estimate_jaccard_ml,
    fisher_information_joint, fisher_information_limit, relative_cardinalities, split_seed,
    AnySketch, JointCounts, JointEstimate, Quantity, RandomStream,
};

use crate::data::{generate_parts, PairSizes};
use crate::error::{spec_error, Result};
use crate::output::{num, CsvRecord};
use crate::sketch::{SketchKind, SketchParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointEstimator {
    /// Likelihood maximization. For MinHash this is the closed form.
    MaxLikelihood { known_cardinalities: bool },
    /// From the estimated sizes of `A`, `B` and the union.
    InclusionExclusion,
    /// `D0 / m`, MinHash only.
    MatchingFraction { known_cardinalities: bool },
}

impl JointEstimator {
    pub fn name(self, kind: SketchKind) -> &'static str {
        use JointEstimator::*;
        match (self, kind) {
            (
                MaxLikelihood {
                    known_cardinalities: true,
                },
                SketchKind::MinHash,
            ) => "closed_form_known",
            (
                MaxLikelihood {
                    known_cardinalities: false,
                },
                SketchKind::MinHash,
            ) => "closed_form_estimated",
            (
                MaxLikelihood {
                    known_cardinalities: true,
                },
                _,
            ) => "ml_known",
            (
                MaxLikelihood {
                    known_cardinalities: false,
                },
                _,
            ) => "ml_estimated",
            (InclusionExclusion, _) => "inclusion_exclusion",
            (
                MatchingFraction {
                    known_cardinalities: true,
                },
                _,
            ) => "matching_fraction_known",
            (
                MatchingFraction {
                    known_cardinalities: false,
                },
                _,
            ) => "matching_fraction_estimated",
        }
    }

    /// Likelihood estimator with the chosen cardinalities, inclusion-exclusion,
    /// and for MinHash also the matching fraction.
    pub fn defaults(kind: SketchKind, known_cardinalities: bool) -> Vec<JointEstimator> {
        let mut list = vec![
            JointEstimator::MaxLikelihood {
                known_cardinalities,
            },
            JointEstimator::InclusionExclusion,
        ];
        if kind == SketchKind::MinHash {
            list.push(JointEstimator::MatchingFraction {
                known_cardinalities,
            });
        }
        list
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSpec {
    pub sketch: SketchParams,
    pub trials: usize,
    pub seed: u64,
    pub union_size: usize,
    pub jaccard_grid: Vec<f64>,
    /// Values of `|A\B| / |B\A|`.
    pub ratio_grid: Vec<f64>,
    pub estimators: Vec<JointEstimator>,
}

/// `J in {0.01, 0.1, 0.5}`.
pub fn default_jaccard_grid() -> Vec<f64> {
    vec![0.01, 0.1, 0.5]
}

/// `|A\B| / |B\A| in {1, 10, 100}`.
pub fn default_ratio_grid() -> Vec<f64> {
    vec![1.0, 10.0, 100.0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointRecord {
    pub sketch: &'static str,
    pub m: usize,
    pub b: f64,
    pub union_size: usize,
    /// Exact Jaccard similarity of the generated pairs.
    pub jaccard: f64,
    pub ratio: f64,
    pub estimator: &'static str,
    pub quantity: Quantity,
    pub trials: usize,
    pub rel_rmse: f64,
    /// Relative RMSE predicted by the Fisher information.
    pub fisher_rmse: f64,
}

impl CsvRecord for JointRecord {
    const HEADER: &'static [&'static str] = &[
        "sketch",
        "m",
        "b",
        "union_size",
        "jaccard",
        "ratio",
        "estimator",
        "quantity",
        "trials",
        "rel_rmse",
        "fisher_rmse",
    ];

    fn fields(&self) -> Vec<String> {
        vec![
            self.sketch.to_string(),
            self.m.to_string(),
            num(self.b),
            self.union_size.to_string(),
            num(self.jaccard),
            num(self.ratio),
            self.estimator.to_string(),
            self.quantity.name().to_string(),
            self.trials.to_string(),
            num(self.rel_rmse),
            num(self.fisher_rmse),
        ]
    }
}

struct PairEstimates {
    n_a: f64,
    n_b: f64,
    n_union: f64,
    counts: JointCounts,
}

impl PairEstimates {
    fn measure(a: &AnySketch, b: &AnySketch) -> Result<Self> {
        Ok(Self {
            n_a: a.estimate()?,
            n_b: b.estimate()?,
            n_union: a.merge(b)?.estimate()?,
            counts: a.joint_counts(b)?,
        })
    }
}

fn estimate(
    estimator: JointEstimator,
    sketch: &SketchParams,
    sizes: PairSizes,
    pair: &PairEstimates,
) -> Result<JointEstimate> {
    let cardinalities = |known| {
        if known {
            (sizes.n_a() as f64, sizes.n_b() as f64)
        } else {
            (pair.n_a, pair.n_b)
        }
    };
    let estimate = match estimator {
        JointEstimator::MaxLikelihood {
            known_cardinalities,
        } => {
            let (n_a, n_b) = cardinalities(known_cardinalities);
            let j = if sketch.kind == SketchKind::MinHash {
                let (u, v) = relative_cardinalities(n_a, n_b)?;
                estimate_jaccard_mh_closed_form(&pair.counts, u, v)?
            } else {
                estimate_jaccard_ml(&pair.counts, n_a, n_b, sketch.b)?
            };
            JointEstimate::new(n_a, n_b, j)?
        }
        JointEstimator::InclusionExclusion => {
            let j = estimate_jaccard_inclusion_exclusion(pair.n_a, pair.n_b, pair.n_union)?;
            JointEstimate::new(pair.n_a, pair.n_b, j)?
        }
        JointEstimator::MatchingFraction {
            known_cardinalities,
        } => {
            if sketch.kind != SketchKind::MinHash {
                return spec_error("the matching fraction applies to MinHash only");
            }
            let (n_a, n_b) = cardinalities(known_cardinalities);
            let j = pair.counts.d_zero as f64 / pair.counts.m() as f64;
            JointEstimate::new(n_a, n_b, j)?
        }
    };
    Ok(estimate)
}

/// Asymptotic RMSE of the likelihood estimate of `quantity` relative to its
/// true value, using the `b -> 1` limit for MinHash.
fn fisher_relative_rmse(
    quantity: Quantity,
    sketch: &SketchParams,
    sizes: PairSizes,
) -> Result<f64> {
    let (n_a, n_b, j) = (sizes.n_a() as f64, sizes.n_b() as f64, sizes.jaccard());
    let (u, v) = relative_cardinalities(n_a, n_b)?;
    let m = sketch.m as u64;
    let info = if sketch.kind == SketchKind::MinHash {
        fisher_information_limit(j, u, v, m)?
    } else {
        fisher_information_joint(j, u, v, sketch.b, m)?
    };
    let truth = JointEstimate::new(n_a, n_b, j)?;
    Ok(quantity.derivative(n_a, n_b, j).abs() / info.sqrt() / quantity.value(&truth))
}

/// `est/truth - 1`; for a zero truth, 0 if the estimate is exact and
/// infinite otherwise.
fn relative_error(est: f64, truth: f64) -> f64 {
    if truth == 0.0 {
        if est == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        est / truth - 1.0
    }
}

pub fn run_joint_experiment(spec: &JointSpec) -> Result<Vec<JointRecord>> {
    if spec.trials == 0 {
        return spec_error("trials must be at least 1");
    }
    if spec.jaccard_grid.is_empty() || spec.ratio_grid.is_empty() || spec.estimators.is_empty() {
        return spec_error("jaccard grid, ratio grid and estimator list must be nonempty");
    }
    if spec.union_size == 0 {
        return spec_error("union size must be at least 1");
    }
    if spec.sketch.kind != SketchKind::MinHash
        && !(spec.sketch.b > 1.0 && spec.sketch.b <= std::f64::consts::E)
    {
        return spec_error(format!(
            "joint estimation needs b in (1, e], got {}",
            spec.sketch.b
        ));
    }
    if spec.sketch.kind != SketchKind::MinHash
        && spec
            .estimators
            .iter()
            .any(|e| matches!(e, JointEstimator::MatchingFraction { .. }))
    {
        return spec_error("the matching fraction applies to MinHash only");
    }
    let proto = spec.sketch.build(spec.union_size as u64)?;
    let config = spec.sketch.resolve(spec.union_size as u64)?;
    let quantities = Quantity::ALL;
    let width = spec.estimators.len() * quantities.len();

    let mut records = Vec::new();
    let mut point = 0u64;
    for &jaccard in &spec.jaccard_grid {
        for &ratio in &spec.ratio_grid {
            let sizes = PairSizes::from_union(spec.union_size, jaccard, ratio)?;
            let truth_estimate =
                JointEstimate::new(sizes.n_a() as f64, sizes.n_b() as f64, sizes.jaccard())?;
            let point_seed = split_seed(spec.seed, point);
            point += 1;

            let squared: Vec<Vec<f64>> = (0..spec.trials as u64)
                .into_par_iter()
                .map(|trial| -> Result<Vec<f64>> {
                    let mut stream = RandomStream::from_seed(split_seed(point_seed, trial));
                    let [s1, s2, s3] = generate_parts(sizes, &mut stream);
                    let mut shared = proto.new_empty_like();
                    s3.iter().for_each(|&e| shared.insert(e));
                    let mut a = shared.clone();
                    s1.iter().for_each(|&e| a.insert(e));
                    let mut b = shared;
                    s2.iter().for_each(|&e| b.insert(e));
                    let pair = PairEstimates::measure(&a, &b)?;
                    let mut out = Vec::with_capacity(width);
                    for &estimator in &spec.estimators {
                        let est = estimate(estimator, &spec.sketch, sizes, &pair)?;
                        for q in quantities {
                            let rel = relative_error(q.value(&est), q.value(&truth_estimate));
                            out.push(rel * rel);
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<_>>()?;

            for (ei, &estimator) in spec.estimators.iter().enumerate() {
                for (qi, &quantity) in quantities.iter().enumerate() {
                    let idx = ei * quantities.len() + qi;
                    let mse = squared.iter().map(|t| t[idx]).sum::<f64>() / spec.trials as f64;
                    records.push(JointRecord {
                        sketch: spec.sketch.label(),
                        m: config.m,
                        b: config.b,
                        union_size: spec.union_size,
                        jaccard: sizes.jaccard(),
                        ratio,
                        estimator: estimator.name(spec.sketch.kind),
                        quantity,
                        trials: spec.trials,
                        rel_rmse: mse.sqrt(),
                        fisher_rmse: fisher_relative_rmse(quantity, &spec.sketch, sizes)?,
                    });
                }
            }
        }
    }
    Ok(records)
}
