use crate::error::{invalid, Result};
use crate::joint::JointCounts;

use super::optimize::brent_root;
use super::special::p_b_unchecked;

/// Relative cardinalities `u = n_A / (n_A + n_B)` and `v = n_B / (n_A + n_B)`.
pub fn relative_cardinalities(n_a: f64, n_b: f64) -> Result<(f64, f64)> {
    if !(n_a > 0.0 && n_b > 0.0 && n_a.is_finite() && n_b.is_finite()) {
        return invalid(format!(
            "cardinalities must be positive and finite, got ({n_a}, {n_b})"
        ));
    }
    let total = n_a + n_b;
    Ok((n_a / total, n_b / total))
}

/// Largest Jaccard similarity compatible with relative cardinalities `u`, `v`.
pub fn jaccard_upper_limit(u: f64, v: f64) -> f64 {
    (u / v).min(v / u)
}

fn check_base(b: f64) -> Result<()> {
    if !(b > 1.0 && b <= std::f64::consts::E) {
        return invalid(format!("joint likelihood requires b in (1, e], got {b}"));
    }
    Ok(())
}

fn check_relative(u: f64, v: f64) -> Result<()> {
    if !(u > 0.0 && v > 0.0 && (u + v - 1.0).abs() <= 1e-12) {
        return invalid(format!(
            "relative cardinalities must be positive and sum to 1, got ({u}, {v})"
        ));
    }
    Ok(())
}

fn check_jaccard(j: f64, u: f64, v: f64) -> Result<()> {
    let limit = jaccard_upper_limit(u, v);
    if !(j >= 0.0 && j <= limit * (1.0 + 1e-12)) {
        return invalid(format!("Jaccard {j} outside [0, {limit}]"));
    }
    Ok(())
}

/// `D+ ln p_b(u - vJ) + D- ln p_b(v - uJ) + D0 ln(1 - p_b(u - vJ) - p_b(v - uJ))`.
pub fn log_likelihood_joint(j: f64, u: f64, v: f64, counts: &JointCounts, b: f64) -> Result<f64> {
    check_base(b)?;
    check_relative(u, v)?;
    check_jaccard(j, u, v)?;
    let p_plus = p_b_unchecked(b, (u - v * j).max(0.0));
    let p_minus = p_b_unchecked(b, (v - u * j).max(0.0));
    let p_zero = 1.0 - p_plus - p_minus;
    let term = |count: u64, p: f64| {
        if count == 0 {
            0.0
        } else {
            count as f64 * p.ln()
        }
    };
    Ok(term(counts.d_plus, p_plus) + term(counts.d_minus, p_minus) + term(counts.d_zero, p_zero))
}

/// Derivative of the joint log-likelihood with respect to `J`.
fn score(j: f64, u: f64, v: f64, counts: &JointCounts, b: f64) -> f64 {
    let c = (b - 1.0) / b;
    let ln_b = (b - 1.0).ln_1p();
    let w_plus = (u - v * j).max(0.0);
    let w_minus = (v - u * j).max(0.0);
    let p_plus = p_b_unchecked(b, w_plus);
    let p_minus = p_b_unchecked(b, w_minus);
    let p_zero = 1.0 - p_plus - p_minus;
    let slope = |w: f64| c / ((1.0 - w * c) * ln_b);
    let (s_plus, s_minus) = (slope(w_plus), slope(w_minus));
    let mut d = 0.0;
    if counts.d_plus > 0 {
        d -= counts.d_plus as f64 * v * s_plus / p_plus;
    }
    if counts.d_minus > 0 {
        d -= counts.d_minus as f64 * u * s_minus / p_minus;
    }
    if counts.d_zero > 0 {
        d += counts.d_zero as f64 * (v * s_plus + u * s_minus) / p_zero;
    }
    d
}

/// Maximum-likelihood Jaccard similarity for cardinalities `n_a`, `n_b`.
///
/// Only the ratio of the cardinalities matters. The log-likelihood is
/// strictly concave for `b <= e`, so the maximum is either a boundary of
/// `[0, min(u/v, v/u)]` or the root of the score, located to `1e-10`.
pub fn estimate_jaccard_ml(counts: &JointCounts, n_a: f64, n_b: f64, b: f64) -> Result<f64> {
    check_base(b)?;
    let (u, v) = relative_cardinalities(n_a, n_b)?;
    let limit = jaccard_upper_limit(u, v);
    let at_zero = score(0.0, u, v, counts, b);
    if at_zero <= 0.0 {
        return Ok(0.0);
    }
    let at_limit = score(limit, u, v, counts, b);
    if at_limit >= 0.0 {
        return Ok(limit);
    }
    // The score diverges at the limit when a vanishing cell has a count.
    let (mut hi, mut at_hi) = (limit, at_limit);
    if !at_hi.is_finite() {
        hi = limit * (1.0 - 1e-13);
        at_hi = score(hi, u, v, counts, b);
        if at_hi >= 0.0 {
            return Ok(hi);
        }
    }
    Ok(brent_root(
        |j| score(j, u, v, counts, b),
        0.0,
        hi,
        at_zero,
        at_hi,
        1e-10,
        200,
    ))
}

/// Fisher information of `m` registers with respect to `J` for known
/// cardinalities; `+inf` at `J = min(u/v, v/u)`.
pub fn fisher_information_joint(j: f64, u: f64, v: f64, b: f64, m: u64) -> Result<f64> {
    if !(b > 1.0 && b.is_finite()) {
        return invalid(format!("base b must be finite and > 1, got {b}"));
    }
    check_relative(u, v)?;
    check_jaccard(j, u, v)?;
    let p_plus = p_b_unchecked(b, (u - v * j).max(0.0));
    let p_minus = p_b_unchecked(b, (v - u * j).max(0.0));
    if p_plus <= 0.0 || p_minus <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let p_zero = 1.0 - p_plus - p_minus;
    let ln_b = (b - 1.0).ln_1p();
    let x = v * b.powf(p_plus);
    let y = u * b.powf(p_minus);
    let scale = m as f64 * (b - 1.0).powi(2) / (b * b * ln_b * ln_b);
    Ok(scale * (x * x / p_plus + y * y / p_minus + (x + y).powi(2) / p_zero))
}

/// Limit of [`fisher_information_joint`] as `b -> 1`.
pub fn fisher_information_limit(j: f64, u: f64, v: f64, m: u64) -> Result<f64> {
    check_relative(u, v)?;
    check_jaccard(j, u, v)?;
    let base = m as f64 / (j * (1.0 - j));
    let correction = 1.0 - (u - v).powi(2) * j / (u * v * (1.0 - j).powi(2));
    Ok(base / correction)
}

/// `(n_A + n_B - n_U) / n_U`, trimmed to `[0, min(n_A/n_B, n_B/n_A)]`.
pub fn estimate_jaccard_inclusion_exclusion(n_a: f64, n_b: f64, n_union: f64) -> Result<f64> {
    if n_union.is_nan() || n_union <= 0.0 {
        return invalid(format!("union estimate must be positive, got {n_union}"));
    }
    if !(n_a >= 0.0 && n_b >= 0.0) {
        return invalid(format!(
            "cardinality estimates must be nonnegative, got ({n_a}, {n_b})"
        ));
    }
    if n_a == 0.0 || n_b == 0.0 {
        return Ok(0.0);
    }
    let raw = (n_a + n_b - n_union) / n_union;
    Ok(raw.clamp(0.0, (n_a / n_b).min(n_b / n_a)))
}

/// Closed-form maximum-likelihood Jaccard estimate for MinHash, using
/// min-based counts (`D+` counts components where A is smaller).
pub fn estimate_jaccard_mh_closed_form(counts: &JointCounts, u: f64, v: f64) -> Result<f64> {
    check_relative(u, v)?;
    let m = counts.m();
    if m == 0 {
        return invalid("counts must cover at least one component");
    }
    let (d_plus, d_minus, d_zero) = (
        counts.d_plus as f64,
        counts.d_minus as f64,
        counts.d_zero as f64,
    );
    let (u2, v2) = (u * u, v * v);
    let x = u2 * (d_zero + d_minus);
    let y = v2 * (d_zero + d_plus);
    let root = ((x - y).powi(2) + 4.0 * d_minus * d_plus * u2 * v2).sqrt();
    let j = (x + y - root) / (2.0 * m as f64 * u * v);
    Ok(j.clamp(0.0, jaccard_upper_limit(u, v)))
}

/// Lower and upper Jaccard bounds from the fraction of equal registers.
pub fn estimate_jaccard_lsh_bounds(d_zero: u64, m: u64, b: f64) -> Result<(f64, f64)> {
    if m == 0 || d_zero > m {
        return invalid(format!(
            "need 0 <= D0 <= m with m > 0, got D0 = {d_zero}, m = {m}"
        ));
    }
    if !(b > 1.0 && b.is_finite()) {
        return invalid(format!("base b must be finite and > 1, got {b}"));
    }
    let f = d_zero as f64 / m as f64;
    let ln_b = (b - 1.0).ln_1p();
    let bm1 = b - 1.0;
    let upper = ((f * ln_b).exp_m1() / bm1).clamp(0.0, 1.0);
    let lower = (2.0 * ((0.5 * (f + 1.0)) * ln_b).exp_m1() / bm1 - 1.0).clamp(0.0, upper);
    Ok((lower, upper))
}

/// Range of the register collision probability `P(K_A = K_B)` over all
/// relative cardinalities with Jaccard similarity `j`.
pub fn collision_probability_bounds(j: f64, b: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&j) {
        return invalid(format!("Jaccard must be in [0, 1], got {j}"));
    }
    if !(b > 1.0 && b.is_finite()) {
        return invalid(format!("base b must be finite and > 1, got {b}"));
    }
    let bm1 = b - 1.0;
    let ln_b = bm1.ln_1p();
    let p_min = (j * bm1).ln_1p() / ln_b;
    let p_max = (j * bm1 + (1.0 - j).powi(2) * bm1 * bm1 / (4.0 * b)).ln_1p() / ln_b;
    Ok((p_min, p_max))
}

/// Joint quantities implied by `(n_A, n_B, J)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedJointQuantities {
    pub union_size: f64,
    pub intersection_size: f64,
    pub diff_a_minus_b: f64,
    pub diff_b_minus_a: f64,
    pub cosine: f64,
    pub inclusion_a: f64,
    pub inclusion_b: f64,
}

impl DerivedJointQuantities {
    pub fn derive(n_a: f64, n_b: f64, j: f64) -> Result<Self> {
        let (u, v) = relative_cardinalities(n_a, n_b)?;
        check_jaccard(j, u, v)?;
        let total = n_a + n_b;
        let intersection = total * j / (1.0 + j);
        Ok(Self {
            union_size: total / (1.0 + j),
            intersection_size: intersection,
            diff_a_minus_b: ((n_a - n_b * j) / (1.0 + j)).max(0.0),
            diff_b_minus_a: ((n_b - n_a * j) / (1.0 + j)).max(0.0),
            cosine: intersection / (n_a * n_b).sqrt(),
            inclusion_a: (intersection / n_a).min(1.0),
            inclusion_b: (intersection / n_b).min(1.0),
        })
    }
}

/// A joint quantity that is a function of `J` for fixed cardinalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Jaccard,
    Union,
    Intersection,
    DiffAMinusB,
    DiffBMinusA,
    Cosine,
    InclusionA,
    InclusionB,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Jaccard,
        Quantity::Union,
        Quantity::Intersection,
        Quantity::DiffAMinusB,
        Quantity::DiffBMinusA,
        Quantity::Cosine,
        Quantity::InclusionA,
        Quantity::InclusionB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Jaccard => "jaccard",
            Quantity::Union => "union",
            Quantity::Intersection => "intersection",
            Quantity::DiffAMinusB => "difference_a_minus_b",
            Quantity::DiffBMinusA => "difference_b_minus_a",
            Quantity::Cosine => "cosine",
            Quantity::InclusionA => "inclusion_a",
            Quantity::InclusionB => "inclusion_b",
        }
    }

    pub fn value(self, estimate: &JointEstimate) -> f64 {
        let q = estimate.quantities();
        match self {
            Quantity::Jaccard => estimate.jaccard,
            Quantity::Union => q.union_size,
            Quantity::Intersection => q.intersection_size,
            Quantity::DiffAMinusB => q.diff_a_minus_b,
            Quantity::DiffBMinusA => q.diff_b_minus_a,
            Quantity::Cosine => q.cosine,
            Quantity::InclusionA => q.inclusion_a,
            Quantity::InclusionB => q.inclusion_b,
        }
    }

    /// `dq/dJ` at fixed `n_A`, `n_B`.
    pub fn derivative(self, n_a: f64, n_b: f64, j: f64) -> f64 {
        let total = n_a + n_b;
        let d = total / (1.0 + j).powi(2);
        match self {
            Quantity::Jaccard => 1.0,
            Quantity::Union => -d,
            Quantity::Intersection => d,
            Quantity::DiffAMinusB | Quantity::DiffBMinusA => -d,
            Quantity::Cosine => d / (n_a * n_b).sqrt(),
            Quantity::InclusionA => d / n_a,
            Quantity::InclusionB => d / n_b,
        }
    }
}

/// Estimated `(n_A, n_B, J)` with `J` trimmed to its natural range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointEstimate {
    pub n_a: f64,
    pub n_b: f64,
    pub jaccard: f64,
}

impl JointEstimate {
    pub fn new(n_a: f64, n_b: f64, jaccard: f64) -> Result<Self> {
        let (u, v) = relative_cardinalities(n_a, n_b)?;
        Ok(Self {
            n_a,
            n_b,
            jaccard: jaccard.clamp(0.0, jaccard_upper_limit(u, v)),
        })
    }

    pub fn quantities(&self) -> DerivedJointQuantities {
        DerivedJointQuantities::derive(self.n_a, self.n_b, self.jaccard).expect("trimmed estimate")
    }
}

/// Asymptotic RMSE of the maximum-likelihood estimate of `quantity`.
pub fn fisher_rmse(quantity: Quantity, n_a: f64, n_b: f64, j: f64, b: f64, m: u64) -> Result<f64> {
    let (u, v) = relative_cardinalities(n_a, n_b)?;
    let info = fisher_information_joint(j, u, v, b, m)?;
    Ok(quantity.derivative(n_a, n_b, j).abs() / info.sqrt())
}
