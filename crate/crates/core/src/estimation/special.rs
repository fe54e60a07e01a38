//! Series-defined helper functions of the estimators.

use crate::error::{invalid, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-15;

/// Consecutive small terms required before a series side is closed.
const SMALL_TERMS: u32 = 8;
const MAX_TERMS: u64 = 50_000_000;

/// Functions of a fixed base `b` whose infinite series are truncated at a
/// relative `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialFunctions {
    b: f64,
    ln_b: f64,
    tolerance: f64,
    /// Upper bounds on `|xi^1 - 1|` and `|xi^2 - 1|`.
    deviation: [f64; 2],
}

impl SpecialFunctions {
    pub fn new(b: f64) -> Result<Self> {
        Self::with_tolerance(b, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(b: f64, tolerance: f64) -> Result<Self> {
        if !(b > 1.0 && b.is_finite()) {
            return invalid(format!("base b must be finite and > 1, got {b}"));
        }
        if !(tolerance > 0.0 && tolerance <= 1e-6) {
            return invalid(format!("tolerance must be in (0, 1e-6], got {tolerance}"));
        }
        let ln_b = b.ln();
        Ok(Self {
            b,
            ln_b,
            tolerance,
            deviation: [fourier_deviation(1, ln_b), fourier_deviation(2, ln_b)],
        })
    }

    /// Upper bound on `max_x |xi^k_b(x) - 1|` from the Fourier coefficients
    /// `Gamma(k - 2 pi i n / ln b) / Gamma(k)` of the periodic function. It
    /// also bounds the relative deviation of `zeta_b(x1, x2)` from `x2 - x1`
    /// for `k = 1`, since `zeta` integrates `xi^1`.
    pub fn deviation_bound(&self, k: u32) -> Result<f64> {
        match k {
            1 | 2 => Ok(self.deviation[k as usize - 1]),
            _ => invalid(format!("xi is defined for powers 1 and 2, got {k}")),
        }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// `xi^k_b(x) = ln b / Gamma(k) * sum_r b^(k(x-r)) exp(-b^(x-r))` for
    /// `k` in `{1, 2}`; close to 1 for moderate `b`.
    pub fn xi(&self, k: u32, x: f64) -> Result<f64> {
        if k != 1 && k != 2 {
            return invalid(format!("xi is defined for powers 1 and 2, got {k}"));
        }
        if !x.is_finite() {
            return invalid(format!("xi argument must be finite, got {x}"));
        }
        if self.deviation[k as usize - 1] <= 0.1 * self.tolerance {
            return Ok(1.0);
        }
        let kf = f64::from(k);
        let ln_b = self.ln_b;
        // Terms peak where b^(x-r) = k.
        let center = (x - kf.ln() / ln_b).round();
        let term = |r: f64| {
            let y = (x - r) * ln_b;
            (kf * y - y.exp()).exp()
        };
        // For b^(x-r) = s small, expanding exp(-s) leaves geometric series:
        // sum_{r' >= r} = sum_j (-1)^j / j! s^(k+j) / (1 - b^-(k+j)).
        let tail = |r: f64| {
            let y = (x - r) * ln_b;
            if y.exp() > TAIL_EXPANSION_LIMIT {
                return None;
            }
            Some(alternating_series(|j| {
                let p = kf + j as f64;
                (p * y).exp() / -(-p * ln_b).exp_m1()
            }))
        };
        let sum = bilateral_sum(center, self.tolerance, term, tail);
        // Gamma(1) = Gamma(2) = 1.
        Ok(ln_b * sum)
    }

    /// `zeta_b(x1, x2) = sum_r exp(-b^(x1-r)) - exp(-b^(x2-r))`, close to
    /// `x2 - x1`.
    pub fn zeta(&self, x1: f64, x2: f64) -> Result<f64> {
        if !(x1.is_finite() && x2.is_finite()) {
            return invalid(format!("zeta arguments must be finite, got ({x1}, {x2})"));
        }
        if x1 == x2 {
            return Ok(0.0);
        }
        if self.deviation[0] <= 0.1 * self.tolerance {
            return Ok(x2 - x1);
        }
        let ln_b = self.ln_b;
        let growth = ((x2 - x1) * ln_b).exp_m1();
        let center = (0.5 * (x1 + x2)).round();
        let term = |r: f64| {
            let s1 = ((x1 - r) * ln_b).exp();
            -(-s1).exp() * (-s1 * growth).exp_m1()
        };
        // With s1 = b^(x1-r) and s2 = s1 b^(x2-x1) both small:
        // sum_{r' >= r} = sum_{j>=1} (-1)^(j+1) / j! s1^j expm1(j (x2-x1) ln b) / (1 - b^-j).
        let tail = |r: f64| {
            let y1 = (x1 - r) * ln_b;
            let y2 = (x2 - r) * ln_b;
            if y1.max(y2).exp() > TAIL_EXPANSION_LIMIT {
                return None;
            }
            Some(alternating_series(|i| {
                // j = i + 1; the extra 1/j turns i! into j!.
                let p = i as f64 + 1.0;
                (p * y1).exp() * (p * (x2 - x1) * ln_b).exp_m1() / -(-p * ln_b).exp_m1() / p
            }))
        };
        Ok(bilateral_sum(center, self.tolerance, term, tail))
    }

    /// `sigma_b(x) = x + (b-1) sum_{k>=1} b^(k-1) x^(b^k)` on `[0, 1]`;
    /// `+inf` at 1.
    pub fn sigma(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        if x > 1.0 - 1e-12 {
            return Ok(f64::INFINITY);
        }
        let ln_x = x.ln();
        let ln_b = self.ln_b;
        let sum = one_sided_sum(self.tolerance, |k| {
            let k = k as f64 + 1.0;
            ((k - 1.0) * ln_b + (k * ln_b).exp() * ln_x).exp()
        });
        Ok(x + (self.b - 1.0) * sum)
    }

    /// `tau_b(x) = 1 - x + (b-1) sum_{k>=0} b^(-k-1) (x^(b^-k) - 1)` on `[0, 1]`.
    pub fn tau(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        if x == 0.0 || x == 1.0 {
            return Ok(0.0);
        }
        let ln_x = x.ln();
        let ln_b = self.ln_b;
        let sum = one_sided_sum(self.tolerance, |k| {
            let k = k as f64;
            (-(k + 1.0) * ln_b).exp() * ((-k * ln_b).exp() * ln_x).exp_m1()
        });
        Ok(1.0 - x + (self.b - 1.0) * sum)
    }
}

fn check_unit(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return invalid(format!("argument must be in [0, 1], got {x}"));
    }
    Ok(())
}

/// Tracks when one side of a series may be closed.
///
/// A term counts as small if it and a geometric bound on the remaining tail,
/// based on the current term ratio, are both below `tolerance * |sum|`. The
/// ratio of all series here eventually decreases monotonically, so the bound
/// holds once the ratio is below 1.
struct SideState {
    previous: f64,
    small: u32,
}

impl SideState {
    fn new(first: f64) -> Self {
        Self {
            previous: first.abs(),
            small: 0,
        }
    }

    fn done(&self) -> bool {
        self.small >= SMALL_TERMS
    }

    fn observe(&mut self, term: f64, sum: f64, tolerance: f64) {
        let t = term.abs();
        let limit = tolerance * sum.abs();
        let small = if t == 0.0 {
            true
        } else {
            let ratio = t / self.previous;
            ratio < 1.0 && t <= limit && t * ratio / (1.0 - ratio) <= limit
        };
        self.small = if small { self.small + 1 } else { 0 };
        self.previous = t;
    }
}

/// `2 sum_{n>=1} |Gamma(k + i w_n)| / Gamma(k)` with `w_n = 2 pi n / ln b`,
/// using `|Gamma(1 + i w)|^2 = pi w / sinh(pi w)` and
/// `|Gamma(2 + i w)|^2 = (1 + w^2) |Gamma(1 + i w)|^2`.
fn fourier_deviation(k: u32, ln_b: f64) -> f64 {
    let mut sum = 0.0;
    for n in 1..=1000 {
        let w = 2.0 * std::f64::consts::PI * f64::from(n) / ln_b;
        let z = std::f64::consts::PI * w;
        // ln sinh z, exact enough for the magnitude of a bound.
        let ln_sinh = if z > 20.0 {
            z - std::f64::consts::LN_2
        } else {
            z.sinh().ln()
        };
        let mut ln_mod = 0.5 * (z.ln() - ln_sinh);
        if k == 2 {
            ln_mod += 0.5 * w.mul_add(w, 1.0).ln();
        }
        let t = 2.0 * ln_mod.exp();
        sum += t;
        if t <= 1e-17 * sum || t == 0.0 {
            break;
        }
    }
    sum
}

/// Bound on `b^(x-r)` below which the upper tail is summed in closed form.
const TAIL_EXPANSION_LIMIT: f64 = 0.05;

/// `sum_{j >= 0} (-1)^j / j! * magnitude(j)` for slowly varying magnitudes.
fn alternating_series(magnitude: impl Fn(u32) -> f64) -> f64 {
    let mut sum = 0.0;
    let mut factorial = 1.0;
    for j in 0..40u32 {
        if j > 0 {
            factorial *= f64::from(j);
        }
        let t = magnitude(j) / factorial;
        sum += if j % 2 == 0 { t } else { -t };
        if t <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `sum_{r in Z} term(center + i)`, accumulated outward from `center` on
/// both sides at once. `upper_tail(r)`, when available, replaces all terms
/// from `r` upward.
fn bilateral_sum(
    center: f64,
    tolerance: f64,
    term: impl Fn(f64) -> f64,
    upper_tail: impl Fn(f64) -> Option<f64>,
) -> f64 {
    let first = term(center);
    let mut sum = first;
    let mut up = SideState::new(first);
    let mut down = SideState::new(first);
    let mut i = 1u64;
    while !(up.done() && down.done()) && i < MAX_TERMS {
        let d = i as f64;
        if !up.done() {
            if let Some(rest) = upper_tail(center + d) {
                sum += rest;
                up.small = SMALL_TERMS;
            } else {
                let t = term(center + d);
                sum += t;
                up.observe(t, sum, tolerance);
            }
        }
        if !down.done() {
            let t = term(center - d);
            sum += t;
            down.observe(t, sum, tolerance);
        }
        i += 1;
    }
    sum
}

/// `sum_{k >= 0} term(k)`.
fn one_sided_sum(tolerance: f64, term: impl Fn(u64) -> f64) -> f64 {
    let first = term(0);
    let mut sum = first;
    let mut side = SideState::new(first);
    let mut k = 1;
    while !side.done() && k < MAX_TERMS {
        let t = term(k);
        sum += t;
        side.observe(t, sum, tolerance);
        k += 1;
    }
    sum
}

/// `p_b(x) = -log_b(1 - x (b-1)/b)`, the probability that a register of A
/// exceeds the one of B when `x = u - vJ`.
pub fn p_b(b: f64, x: f64) -> Result<f64> {
    if !(b > 1.0 && b.is_finite()) {
        return invalid(format!("base b must be finite and > 1, got {b}"));
    }
    check_unit(x)?;
    Ok(p_b_unchecked(b, x))
}

#[inline]
pub(crate) fn p_b_unchecked(b: f64, x: f64) -> f64 {
    let bm1 = b - 1.0;
    -(-x * bm1 / b).ln_1p() / bm1.ln_1p()
}
