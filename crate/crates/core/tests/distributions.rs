//! Distributional checks with fixed seeds.

use setsketch::{
    compare_registers, estimate_jaccard_mh_closed_form, ghll_applicability, rsd_theoretical,
    split_seed, Applicability, Ghll, IntervalBoundaries, MinHash, RandomStream, RegisterOrdering,
    SetSketch, SketchConfig, Variant,
};

/// KS distance between pooled register samples and the clamped register CDF
/// `exp(-n a b^-k)`.
fn register_ks(samples: &[u32], n: f64, config: &SketchConfig) -> f64 {
    let q = config.q;
    let mut counts = vec![0u64; q as usize + 2];
    for &k in samples {
        counts[k as usize] += 1;
    }
    let total = samples.len() as f64;
    let mut cumulative = 0u64;
    let mut worst = 0.0f64;
    for k in 0..=q + 1 {
        cumulative += counts[k as usize];
        let model = if k == q + 1 {
            1.0
        } else {
            (-n * config.a * config.b.powi(-(k as i32))).exp()
        };
        worst = worst.max((cumulative as f64 / total - model).abs());
    }
    worst
}

fn check_marginals(variant: Variant, b: f64) {
    let config = SketchConfig::new(4, b, 20.0, if b < 1.5 { 2000 } else { 62 }).unwrap();
    let proto = SetSketch::new(config, variant).unwrap();
    for n in [1u64, 4, 400] {
        let mut samples = Vec::new();
        for trial in 0..10_000u64 {
            let mut s = proto.new_empty_like();
            let seed = split_seed(n * 7919 + b.to_bits(), trial);
            let mut elements = RandomStream::from_seed(seed);
            for _ in 0..n {
                s.insert(elements.next_u64());
            }
            samples.extend_from_slice(s.registers());
        }
        let ks = register_ks(&samples, n as f64, &config);
        assert!(ks < 0.01, "{variant:?} b={b} n={n}: KS {ks}");
    }
}

#[test]
fn setsketch1_marginals_follow_register_distribution() {
    check_marginals(Variant::SetSketch1, 2.0);
    check_marginals(Variant::SetSketch1, 1.2);
}

#[test]
fn setsketch2_marginals_follow_register_distribution() {
    check_marginals(Variant::SetSketch2, 2.0);
    check_marginals(Variant::SetSketch2, 1.2);
}

#[test]
fn intervals_have_equal_probability() {
    let m = 16;
    let gamma = IntervalBoundaries::new(m, 20.0).unwrap();
    let mut s = RandomStream::from_seed(2024);
    let draws = 1_000_000;
    let mut counts = vec![0u64; m];
    for _ in 0..draws {
        let x = s.next_exponential(20.0).unwrap();
        let j = gamma.as_slice().partition_point(|&g| g <= x) - 1;
        counts[j] += 1;
    }
    let p = 1.0 / m as f64;
    let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
    for (j, &c) in counts.iter().enumerate() {
        let z = (c as f64 - draws as f64 * p) / sigma;
        assert!(z.abs() < 4.0, "interval {j}: z = {z}");
    }
}

fn two_sample_ks(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut worst) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        worst = worst.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    worst
}

#[test]
fn setsketch1_approaches_minhash_for_small_base() {
    let (m, n, a, b) = (16usize, 50u64, 20.0, 1.0001);
    let config = SketchConfig::new(m, b, a, 400_000).unwrap();
    let proto = SetSketch::new(config, Variant::SetSketch1).unwrap();
    let (mut transformed, mut minhash) = (Vec::new(), Vec::new());
    for trial in 0..1000u64 {
        let mut s = proto.new_empty_like();
        let mut mh = MinHash::new(m).unwrap();
        let mut elements = RandomStream::from_seed(split_seed(77, trial));
        for _ in 0..n {
            s.insert(elements.next_u64());
        }
        let mut elements = RandomStream::from_seed(split_seed(78, trial));
        for _ in 0..n {
            mh.insert(elements.next_u64());
        }
        transformed.extend(
            s.registers()
                .iter()
                .map(|&k| -(-a * b.powi(-(k as i32))).exp_m1()),
        );
        minhash.extend_from_slice(mh.components());
    }
    let ks = two_sample_ks(transformed, minhash);
    assert!(ks < 0.02, "KS {ks}");
}

#[test]
fn minhash_matching_fraction_is_unbiased() {
    let (m, trials) = (256usize, 1000u64);
    // |A| = |B| = 1000 with J = 0.5: 333 + 334 shared.
    let (n1, n3) = (333u64, 667u64);
    let j = n3 as f64 / (2 * n1 + n3) as f64;
    let mut sum = 0.0;
    for trial in 0..trials {
        let mut elements = RandomStream::from_seed(split_seed(91, trial));
        let (mut a, mut b) = (MinHash::new(m).unwrap(), MinHash::new(m).unwrap());
        for _ in 0..n1 {
            a.insert(elements.next_u64());
            b.insert(elements.next_u64());
        }
        for _ in 0..n3 {
            let e = elements.next_u64();
            a.insert(e);
            b.insert(e);
        }
        sum += a.matching_fraction(&b).unwrap();
    }
    let mean = sum / trials as f64;
    let sigma = (j * (1.0 - j) / m as f64).sqrt() / (trials as f64).sqrt();
    assert!((mean - j).abs() < 3.0 * sigma, "mean {mean} vs {j}");
}

#[test]
fn minhash_closed_form_beats_matching_fraction() {
    let (m, trials, n) = (256usize, 1000u64, 1000u64);
    for j in [0.1, 0.5] {
        let shared = (j * 2.0 * n as f64 / (1.0 + j)).round() as u64;
        let only = n - shared;
        let truth = shared as f64 / (2 * only + shared) as f64;
        let (mut se_closed, mut se_match) = (0.0, 0.0);
        for trial in 0..trials {
            let mut elements = RandomStream::from_seed(split_seed(j.to_bits(), trial));
            let (mut a, mut b) = (MinHash::new(m).unwrap(), MinHash::new(m).unwrap());
            for _ in 0..only {
                a.insert(elements.next_u64());
                b.insert(elements.next_u64());
            }
            for _ in 0..shared {
                let e = elements.next_u64();
                a.insert(e);
                b.insert(e);
            }
            let c = compare_registers(a.components(), b.components(), RegisterOrdering::MinBased)
                .unwrap();
            se_closed += (estimate_jaccard_mh_closed_form(&c, 0.5, 0.5).unwrap() - truth).powi(2);
            se_match += (a.matching_fraction(&b).unwrap() - truth).powi(2);
        }
        assert!(
            se_closed <= se_match * 1.0001,
            "J={j}: {se_closed} vs {se_match}"
        );
    }
}

#[test]
fn ghll_corrected_estimate_within_three_rsd() {
    let (m, n) = (256usize, 10_000u64);
    let rsd = rsd_theoretical(2.0, m).unwrap();
    let mut g = Ghll::new(m, 2.0, 62, true).unwrap();
    let mut elements = RandomStream::from_seed(4242);
    for _ in 0..n {
        g.insert(elements.next_u64());
    }
    let rel = g.estimate_corrected() / n as f64 - 1.0;
    assert!(rel.abs() < 3.0 * rsd, "{rel}");
}

#[test]
fn raw_estimator_rmse_matches_theory() {
    let (m, n, trials) = (256usize, 10_000u64, 1000u64);
    let config = SketchConfig::new(m, 2.0, 20.0, 62).unwrap();
    let proto = SetSketch::new(config, Variant::SetSketch1).unwrap();
    let (mut se, mut se_ml) = (0.0, 0.0);
    let mut gaps = Vec::new();
    for trial in 0..trials {
        let mut s = proto.new_empty_like();
        let mut elements = RandomStream::from_seed(split_seed(5, trial));
        for _ in 0..n {
            s.insert(elements.next_u64());
        }
        let raw = s.estimate_raw();
        let ml = s.estimate_ml();
        se += (raw / n as f64 - 1.0).powi(2);
        se_ml += (ml / n as f64 - 1.0).powi(2);
        gaps.push(((ml - raw) / raw).abs());
    }
    let rmse = (se / trials as f64).sqrt();
    let rmse_ml = (se_ml / trials as f64).sqrt();
    let rsd = rsd_theoretical(2.0, m).unwrap();
    assert!(
        rmse > 0.95 * rsd && rmse < 1.15 * rsd,
        "rmse {rmse} rsd {rsd}"
    );
    // Both estimators have ~6.5% error here, so per-sketch gaps of a few
    // tenths of a percent are expected; the error levels themselves agree.
    assert!(
        (rmse_ml / rmse - 1.0).abs() < 0.02,
        "ml {rmse_ml} raw {rmse}"
    );
    gaps.sort_by(f64::total_cmp);
    assert!(gaps[949] < 0.015, "95th percentile gap {}", gaps[949]);
}

#[test]
fn minhash_cardinality_rmse() {
    let (m, n, trials) = (256usize, 10_000u64, 1000u64);
    let mut se = 0.0;
    for trial in 0..trials {
        let mut mh = MinHash::new(m).unwrap();
        let mut elements = RandomStream::from_seed(split_seed(6, trial));
        for _ in 0..n {
            mh.insert(elements.next_u64());
        }
        se += (mh.estimate().unwrap() / n as f64 - 1.0).powi(2);
    }
    let rmse = (se / trials as f64).sqrt();
    assert!((rmse * 16.0 - 1.0).abs() < 0.15, "{rmse}");
}

#[test]
fn ghll_applicability_after_coupon_collector_threshold() {
    let m = 64usize;
    let harmonic: f64 = (1..=m).map(|i| 1.0 / i as f64).sum();
    let n = (10.0 * m as f64 * harmonic) as u64;
    let proto = Ghll::new(m, 2.0, 62, true).unwrap();
    let mut ok = 0;
    for trial in 0..100u64 {
        let mut elements = RandomStream::from_seed(split_seed(8, trial));
        let (mut a, mut b) = (proto.new_empty_like(), proto.new_empty_like());
        for _ in 0..n {
            a.insert(elements.next_u64());
            b.insert(elements.next_u64());
        }
        if ghll_applicability(&a, &b).unwrap() == Applicability::Ok {
            ok += 1;
        }
    }
    assert!(ok >= 95, "{ok}");
}

/// Tail probabilities of the validated parameters, sampled directly.
#[test]
fn validated_q_bounds_overflow_probability() {
    let (m, b, a, epsilon, n_max) = (256usize, 2.0, 20.0, 0.01, 1e6);
    let base = SketchConfig::new(m, b, a, 62).unwrap();
    let report = base.validate(epsilon, n_max).unwrap();
    let q = report.q_min as u32;
    let config = SketchConfig::new(m, b, a, q).unwrap();
    let trials = 100_000u64;
    let mut stream = RandomStream::from_seed(31);
    // The minimum of n_max exponentials with rate a is exponential with rate n_max a.
    let mut overflow = 0u64;
    for _ in 0..trials {
        let any = (0..m).any(|_| {
            let h = stream.next_exponential(n_max * a).unwrap();
            (1.0 - h.ln() / b.ln()).floor() > f64::from(q) + 1.0
        });
        if any {
            overflow += 1;
        }
    }
    let rate = overflow as f64 / trials as f64;
    let sampling = 3.0 * (epsilon / trials as f64).sqrt();
    assert!(rate <= epsilon + sampling, "overflow rate {rate}");
    assert!(
        (rate - config.overflow_probability(n_max)).abs() < 4.0 * (epsilon / trials as f64).sqrt()
    );

    // One fewer level violates the bound with a rate close to the analytic one.
    let smaller = SketchConfig::new(m, b, a, q - 1).unwrap();
    assert!(smaller.overflow_probability(n_max) > config.overflow_probability(n_max));

    // Negative registers of singletons stay below epsilon when a >= a_min.
    assert!(a >= report.a_min);
    let proto = SetSketch::new(config, Variant::SetSketch1).unwrap();
    let mut negative = 0u64;
    let singles = 20_000u64;
    for trial in 0..singles {
        let mut s = proto.new_empty_like();
        s.insert(split_seed(99, trial));
        if s.registers().contains(&0) {
            negative += 1;
        }
    }
    assert!((negative as f64 / singles as f64) <= epsilon);
}

#[test]
fn collision_fraction_within_band() {
    let (m, n_union, trials) = (256usize, 2000u64, 200u64);
    for b in [1.001, 2.0] {
        let config = SketchConfig::new(m, b, 20.0, if b < 1.5 { 65534 } else { 62 }).unwrap();
        let proto = SetSketch::new(config, Variant::SetSketch1).unwrap();
        for j in [0.1, 0.5, 0.9] {
            let shared = (j * n_union as f64).round() as u64;
            let only = (n_union - shared) / 2;
            let (p_min, p_max) = setsketch::collision_probability_bounds(j, b).unwrap();
            let mut sum = 0.0;
            for trial in 0..trials {
                let mut elements =
                    RandomStream::from_seed(split_seed(b.to_bits() ^ j.to_bits(), trial));
                let (mut sa, mut sb) = (proto.new_empty_like(), proto.new_empty_like());
                for _ in 0..only {
                    sa.insert(elements.next_u64());
                    sb.insert(elements.next_u64());
                }
                for _ in 0..shared {
                    let e = elements.next_u64();
                    sa.insert(e);
                    sb.insert(e);
                }
                let c =
                    compare_registers(sa.registers(), sb.registers(), RegisterOrdering::MaxBased)
                        .unwrap();
                sum += c.d_zero as f64 / m as f64;
            }
            let mean = sum / trials as f64;
            let sigma = (p_max * (1.0 - p_min) / (m as f64 * trials as f64)).sqrt();
            assert!(
                mean >= p_min - 3.0 * sigma && mean <= p_max + 3.0 * sigma,
                "b={b} J={j}: {mean}"
            );
        }
    }
}
