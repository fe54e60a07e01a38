use crate::config::SketchConfig;
use crate::error::{invalid, Result};
use crate::histogram::RegisterHistogram;

use super::optimize::brent_root;
use super::special::SpecialFunctions;

/// `m (1 - 1/b) / (a ln b S)` for `S = sum_i b^-K_i`.
pub fn raw_from_power_sum(config: &SketchConfig, power_sum: f64) -> f64 {
    let m = config.m as f64;
    let b = config.b;
    m * (1.0 - 1.0 / b) / (config.a * b.ln() * power_sum)
}

/// Closed-form estimate from register values.
pub fn estimate_cardinality_raw(registers: &[u32], config: &SketchConfig) -> f64 {
    let b = config.b;
    let sum: f64 = registers.iter().map(|&k| b.powf(-f64::from(k))).sum();
    raw_from_power_sum(config, sum)
}

fn check_histogram(histogram: &RegisterHistogram, config: &SketchConfig) -> Result<()> {
    if histogram.q() != config.q {
        return invalid(format!(
            "histogram has q = {}, config has q = {}",
            histogram.q(),
            config.q
        ));
    }
    if histogram.total() != config.m as u64 {
        return invalid(format!(
            "histogram sums to {}, expected m = {}",
            histogram.total(),
            config.m
        ));
    }
    Ok(())
}

/// Estimate with series corrections for registers stuck at 0 or `q+1`.
///
/// Returns 0 for an empty sketch and `+inf` when all registers are
/// saturated; equals the raw estimate when neither extreme occurs.
pub fn estimate_cardinality_corrected(
    histogram: &RegisterHistogram,
    config: &SketchConfig,
) -> Result<f64> {
    check_histogram(histogram, config)?;
    let functions = SpecialFunctions::new(config.b)?;
    let m = config.m as f64;
    let b = config.b;
    let q = config.q;
    let counts = histogram.counts();
    let mut sum = 0.0;
    for (k, &c) in counts.iter().enumerate().take(q as usize + 1).skip(1) {
        if c > 0 {
            sum += c as f64 * b.powf(-(k as f64));
        }
    }
    let low = functions.sigma(histogram.zeros() as f64 / m)?;
    if low.is_infinite() {
        return Ok(0.0);
    }
    if histogram.zeros() > 0 {
        sum += m * low;
    }
    let saturated = histogram.saturated();
    if saturated > 0 {
        sum += m * b.powf(-f64::from(q)) * functions.tau(1.0 - saturated as f64 / m)?;
    }
    Ok(m * (1.0 - 1.0 / b) / (config.a * b.ln() * sum))
}

/// Maximum-likelihood estimate under independent registers.
///
/// Cell probabilities follow `P(K <= k) = exp(-n a b^-k)`; the boundary cells
/// take the clamped masses `P(K = 0) = exp(-n a)` and
/// `P(K = q+1) = 1 - exp(-n a b^-q)`. The log-likelihood is concave in `n`,
/// so its maximum is the root of the score, searched in `ln n`.
pub fn estimate_cardinality_ml(
    histogram: &RegisterHistogram,
    config: &SketchConfig,
) -> Result<f64> {
    check_histogram(histogram, config)?;
    let m = config.m as u64;
    if histogram.zeros() == m {
        return Ok(0.0);
    }
    if histogram.saturated() == m {
        return Ok(f64::INFINITY);
    }
    let a = config.a;
    let b = config.b;
    let q = config.q as usize;
    let cells: Vec<(usize, f64)> = histogram
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| (k, c as f64))
        .collect();
    let alpha = |k: usize| a * b.powf(-(k as f64));
    let bm1 = b - 1.0;
    let score = |t: f64| -> f64 {
        let n = t.exp();
        cells
            .iter()
            .map(|&(k, c)| {
                let d = if k == 0 {
                    -a
                } else if k == q + 1 {
                    let al = alpha(q);
                    al / (n * al).exp_m1()
                } else {
                    let al = alpha(k);
                    -al + al * bm1 / (n * al * bm1).exp_m1()
                };
                c * n * d
            })
            .sum()
    };
    // Bracket the root around the closed-form estimate.
    let start = estimate_cardinality_raw_hist(histogram, config)
        .max(f64::MIN_POSITIVE)
        .ln();
    let (mut lo, mut hi) = (start - 1.0, start + 1.0);
    let (mut f_lo, mut f_hi) = (score(lo), score(hi));
    let mut steps = 0;
    while f_lo < 0.0 && steps < 2000 {
        hi = lo;
        f_hi = f_lo;
        lo -= 2.0;
        f_lo = score(lo);
        steps += 1;
    }
    while f_hi > 0.0 && steps < 4000 {
        lo = hi;
        f_lo = f_hi;
        hi += 2.0;
        f_hi = score(hi);
        steps += 1;
    }
    if f_lo < 0.0 || f_hi > 0.0 {
        return estimate_cardinality_corrected(histogram, config);
    }
    let t = brent_root(score, lo, hi, f_lo, f_hi, 1e-10, 200);
    Ok(t.exp())
}

fn estimate_cardinality_raw_hist(histogram: &RegisterHistogram, config: &SketchConfig) -> f64 {
    let b = config.b;
    let sum: f64 = histogram
        .counts()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| c as f64 * b.powf(-(k as f64)))
        .sum();
    raw_from_power_sum(config, sum)
}

/// Asymptotic relative standard error `sqrt((b+1)/(b-1) ln b - 1) / sqrt(m)`.
pub fn rsd_theoretical(b: f64, m: usize) -> Result<f64> {
    if !(b > 1.0 && b.is_finite()) {
        return invalid(format!("base b must be finite and > 1, got {b}"));
    }
    if m == 0 {
        return invalid("m must be positive");
    }
    let bm1 = b - 1.0;
    // (b+1)/(b-1) ln b - 1, written to keep precision as b -> 1.
    let ln_b = bm1.ln_1p();
    let factor = ((b + 1.0) * ln_b - bm1) / bm1;
    Ok(factor.max(0.0).sqrt() / (m as f64).sqrt())
}

/// `m / sum_i -ln(1 - V_i)` for MinHash components in `(0, 1)`.
pub fn estimate_cardinality_mh(components: &[f64]) -> Result<f64> {
    if components.is_empty() {
        return invalid("no components");
    }
    let mut sum = 0.0;
    for &v in components {
        if !(v > 0.0 && v < 1.0) {
            return invalid(format!(
                "component {v} outside (0, 1); was the sketch updated?"
            ));
        }
        sum -= (-v).ln_1p();
    }
    Ok(components.len() as f64 / sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(m: usize, b: f64, a: f64, q: u32) -> SketchConfig {
        SketchConfig::new(m, b, a, q).unwrap()
    }

    #[test]
    fn raw_closed_forms() {
        let c = cfg(8, 2.0, 20.0, 62);
        let zero = estimate_cardinality_raw(&[0; 8], &c);
        assert!((zero - 0.5 / (20.0 * 2f64.ln())).abs() < 1e-15);
        assert!((zero - 0.036_067).abs() < 1e-6);
        let ten = estimate_cardinality_raw(&[10; 8], &c);
        assert!((ten - 36.93).abs() < 0.01, "{ten}");
    }

    #[test]
    fn corrected_extremes() {
        let c = cfg(16, 2.0, 20.0, 62);
        let empty = RegisterHistogram::from_registers(&[0; 16], 62);
        assert_eq!(estimate_cardinality_corrected(&empty, &c).unwrap(), 0.0);
        let full = RegisterHistogram::from_registers(&[63; 16], 62);
        assert_eq!(
            estimate_cardinality_corrected(&full, &c).unwrap(),
            f64::INFINITY
        );
        let wrong = RegisterHistogram::from_registers(&[1; 15], 62);
        assert!(estimate_cardinality_corrected(&wrong, &c).is_err());
    }

    #[test]
    fn corrected_equals_raw_without_extremes() {
        let c = cfg(6, 1.3, 7.0, 90);
        let regs = [1, 5, 9, 90, 44, 3];
        let h = RegisterHistogram::from_registers(&regs, 90);
        let raw = estimate_cardinality_raw(&regs, &c);
        let corrected = estimate_cardinality_corrected(&h, &c).unwrap();
        assert!(((raw - corrected) / raw).abs() < 1e-12);
    }

    #[test]
    fn single_register_ml_has_closed_form() {
        let (b, a) = (2.0, 20.0);
        let c = cfg(1, b, a, 62);
        for k in [1u32, 5, 30] {
            let h = RegisterHistogram::from_registers(&[k], 62);
            let ml = estimate_cardinality_ml(&h, &c).unwrap();
            let exact = b.ln() / (a * b.powi(-(k as i32)) * (b - 1.0));
            assert!(((ml - exact) / exact).abs() < 1e-9, "k={k} {ml} vs {exact}");
        }
    }

    #[test]
    fn single_register_ml_matches_grid_search() {
        let (b, a, k) = (1.5, 3.0, 7);
        let c = cfg(1, b, a, 100);
        let h = RegisterHistogram::from_registers(&[k], 100);
        let ml = estimate_cardinality_ml(&h, &c).unwrap();
        let log_lik = |n: f64| {
            let hi = (-n * a * b.powi(-(k as i32))).exp();
            let lo = (-n * a * b.powi(-(k as i32) + 1)).exp();
            (hi - lo).ln()
        };
        // 10^6-point grid over a factor-100 range around the optimum.
        let (lo, hi) = ((ml / 10.0).ln(), (ml * 10.0).ln());
        let best = (0..1_000_000)
            .map(|i| (lo + (hi - lo) * i as f64 / 999_999.0).exp())
            .max_by(|x, y| log_lik(*x).partial_cmp(&log_lik(*y)).unwrap())
            .unwrap();
        assert!(((best - ml) / ml).abs() < 1e-5, "{best} vs {ml}");
    }

    #[test]
    fn ml_fallbacks() {
        let c = cfg(4, 2.0, 20.0, 10);
        let empty = RegisterHistogram::from_registers(&[0; 4], 10);
        assert_eq!(estimate_cardinality_ml(&empty, &c).unwrap(), 0.0);
        let full = RegisterHistogram::from_registers(&[11; 4], 10);
        assert_eq!(estimate_cardinality_ml(&full, &c).unwrap(), f64::INFINITY);
        let mixed = RegisterHistogram::from_registers(&[0, 11, 0, 11], 10);
        let n = estimate_cardinality_ml(&mixed, &c).unwrap();
        assert!(n.is_finite() && n > 0.0);
    }

    #[test]
    fn rsd_values() {
        assert!((rsd_theoretical(2.0, 1).unwrap() - (3.0 * 2f64.ln() - 1.0).sqrt()).abs() < 1e-15);
        assert!((rsd_theoretical(2.0, 1).unwrap() - 1.0389).abs() < 1e-4);
        assert!((rsd_theoretical(1.0 + 1e-9, 256).unwrap() - 1.0 / 16.0).abs() < 1e-6);
        let mut prev = 0.0;
        for i in 0..=1000 {
            let b = 1.0001 + i as f64 * (2.0 - 1.0001) / 1000.0;
            let r = rsd_theoretical(b, 64).unwrap();
            assert!(r >= prev);
            prev = r;
        }
        assert!(rsd_theoretical(1.0, 4).is_err());
    }

    #[test]
    fn minhash_cardinality() {
        let v = vec![1.0 - (-1.0f64).exp(); 32];
        assert!((estimate_cardinality_mh(&v).unwrap() - 1.0).abs() < 1e-12);
        assert!(estimate_cardinality_mh(&[0.5, 1.0]).is_err());
        assert!(estimate_cardinality_mh(&[]).is_err());
    }
}
