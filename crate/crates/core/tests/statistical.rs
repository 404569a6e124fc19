//! Monte-Carlo checks of the perturbation distributions and of the
//! estimator's mean and variance against their closed forms.

use pureldp::framework::{estimate, exact_variance, var_star, PureParams};
use pureldp::protocols::{laplace_sample, ue_perturb, ProtocolKind, ProtocolSpec};
use pureldp::Report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn within_binomial(hits: u64, trials: u64, p: f64) -> bool {
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    (hits as f64 - trials as f64 * p).abs() <= 4.0 * sd
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[test]
fn de_output_distribution() {
    let spec = ProtocolSpec::new(ProtocolKind::De, 1.0, 4).unwrap();
    let (p, q) = spec.rr_probabilities().unwrap();
    let mut r = rng(1);
    let draws = 1_000_000u64;
    let mut hist = [0u64; 4];
    for _ in 0..draws {
        match spec.perturb(0, &mut r).unwrap() {
            Report::Categorical(y) => hist[y] += 1,
            other => panic!("{other:?}"),
        }
    }
    assert!(within_binomial(hist[0], draws, p), "{hist:?}");
    for &h in &hist[1..] {
        assert!(within_binomial(h, draws, q), "{hist:?}");
    }
}

#[test]
fn laplace_component_moments() {
    let eps = 2.0;
    let spec = ProtocolSpec::new(ProtocolKind::She, eps, 3).unwrap();
    let mut r = rng(2);
    let draws = 1_000_000;
    let own: Vec<f64> = (0..draws)
        .map(|_| match spec.perturb(1, &mut r).unwrap() {
            Report::Histogram(h) => h[1],
            other => panic!("{other:?}"),
        })
        .collect();
    let (mean, var) = mean_var(&own);
    let want = 8.0 / (eps * eps);
    assert!((var / want - 1.0).abs() < 0.02, "variance {var}");
    assert!(
        (mean - 1.0).abs() < 4.0 * (want / draws as f64).sqrt(),
        "mean {mean}"
    );
}

#[test]
fn laplace_cdf_matches() {
    let mut r = rng(3);
    let scale = 0.7;
    let draws = 400_000u64;
    let xs: Vec<f64> = (0..draws).map(|_| laplace_sample(&mut r, scale)).collect();
    for t in [-2.0, -0.5, 0.0, 0.3, 1.5] {
        let cdf = if t < 0.0 {
            0.5 * (t / scale).exp()
        } else {
            1.0 - 0.5 * (-t / scale).exp()
        };
        let hits = xs.iter().filter(|&&x| x <= t).count() as u64;
        assert!(within_binomial(hits, draws, cdf), "t={t}");
    }
}

#[test]
fn she_sum_variance() {
    // 2000 runs rather than 200 so a 10% band is about 3 standard errors
    let (n, eps, runs) = (10_000, 2.0, 2000);
    let spec = ProtocolSpec::new(ProtocolKind::She, eps, 2).unwrap();
    let mut r = rng(4);
    let est: Vec<f64> = (0..runs)
        .map(|_| {
            let reports: Vec<Report> = (0..n).map(|_| spec.perturb(0, &mut r).unwrap()).collect();
            spec.aggregate(&reports).unwrap().estimates[1]
        })
        .collect();
    let (_, var) = mean_var(&est);
    let want = n as f64 * 8.0 / (eps * eps);
    assert!((var / want - 1.0).abs() < 0.10, "variance {var} vs {want}");
}

#[test]
fn ue_bit_rates() {
    let mut r = rng(5);
    let draws = 1_000_000u64;
    let mut ones = [0u64; 4];
    for _ in 0..draws {
        for (o, b) in ones.iter_mut().zip(ue_perturb(0, 4, 0.75, 0.25, &mut r)) {
            *o += u64::from(b);
        }
    }
    assert!(within_binomial(ones[0], draws, 0.75));
    for &o in &ones[1..] {
        assert!(within_binomial(o, draws, 0.25));
    }
}

#[test]
fn exact_variance_matches_simulation() {
    let e1 = 1f64.exp();
    let params = PureParams::new(0.5, 1.0 / (e1 + 1.0)).unwrap();
    let (n, f, trials) = (1000usize, 0.1, 100_000);
    let holders = (n as f64 * f) as usize;
    let mut r = rng(6);
    let est: Vec<f64> = (0..trials)
        .map(|_| {
            let mut c = 0u64;
            for u in 0..n {
                let v = usize::from(u >= holders);
                c += u64::from(ue_perturb(v, 2, params.p_star(), params.q_star(), &mut r)[0]);
            }
            estimate(&[c], n as u64, params).unwrap().estimates[0]
        })
        .collect();
    let (mean, var) = mean_var(&est);
    let want = exact_variance(params, n as f64, f);
    assert!((var / want - 1.0).abs() < 0.03, "{var} vs {want}");
    assert!((mean - holders as f64).abs() < 4.0 * (want / trials as f64).sqrt());
}

/// Each pure protocol at small (n, d): the estimator's mean and variance over
/// 10^5 independent populations match the closed forms.
#[test]
fn estimator_mean_and_variance_per_protocol() {
    let (n, d, trials) = (40usize, 4usize, 100_000);
    let values: Vec<usize> = (0..n).map(|u| if u < 10 { 0 } else { 1 + u % 3 }).collect();
    for (i, kind) in ProtocolKind::PURE.into_iter().enumerate() {
        let spec = ProtocolSpec::new(kind, 1.0, d).unwrap();
        let params = spec.pure_params().unwrap();
        let mut r = rng(100 + i as u64);
        let mut est0 = Vec::with_capacity(trials);
        let mut counts = vec![0u64; d];
        for _ in 0..trials {
            counts.iter_mut().for_each(|c| *c = 0);
            for &v in &values {
                let rep = spec.perturb(v, &mut r).unwrap();
                spec.accumulate_support(&rep, &mut counts).unwrap();
            }
            est0.push(estimate(&counts, n as u64, params).unwrap().estimates[0]);
        }
        let (mean, var) = mean_var(&est0);
        let want = exact_variance(params, n as f64, 0.25);
        assert!(
            (mean - 10.0).abs() <= 4.0 * (want / trials as f64).sqrt(),
            "{kind}: mean {mean}"
        );
        assert!(
            (var / want - 1.0).abs() < 0.05,
            "{kind}: var {var} vs {want}"
        );
    }
}

#[test]
fn purity_of_supports() {
    let draws = 200_000u64;
    for (i, kind) in ProtocolKind::PURE.into_iter().enumerate() {
        let spec = ProtocolSpec::new(kind, 1.5, 6).unwrap();
        let params = spec.pure_params().unwrap();
        let mut r = rng(200 + i as u64);
        let (mut own, mut other) = (0u64, 0u64);
        for _ in 0..draws {
            let rep = spec.perturb(2, &mut r).unwrap();
            own += u64::from(spec.supports(&rep, 2).unwrap());
            other += u64::from(spec.supports(&rep, 5).unwrap());
        }
        assert!(
            within_binomial(own, draws, params.p_star()),
            "{kind}: own {own}"
        );
        assert!(
            within_binomial(other, draws, params.q_star()),
            "{kind}: other {other}"
        );
    }
}

#[test]
fn de_support_sums_to_n() {
    let spec = ProtocolSpec::new(ProtocolKind::De, 0.8, 9).unwrap();
    let mut r = rng(7);
    let reports: Vec<Report> = (0..5000)
        .map(|_| spec.perturb(r.random_range(0..9), &mut r).unwrap())
        .collect();
    let counts = pureldp::framework::support_count(&reports, &spec).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), 5000);
}

#[test]
fn var_star_uses_integer_g_for_olh() {
    let spec = ProtocolSpec::new(ProtocolKind::Olh, 1.0, 16).unwrap();
    assert_eq!(spec.g(), Some(4));
    let params = spec.pure_params().unwrap();
    let e = 1f64.exp();
    assert!((params.p_star() - e / (e + 3.0)).abs() < 1e-12);
    assert!((params.q_star() - 0.25).abs() < 1e-15);
    let v = var_star(params);
    assert!((v - 3.69).abs() < 0.01, "{v}");
}

mod harness {
    use pureldp::analytics::analytic_var;
    use pureldp::framework::exact_variance;
    use pureldp::sim::{run_trial_with, zipf_pmf, DataSource, ExperimentConfig};
    use pureldp::{Execution, ProtocolKind};

    /// With a tiny domain the frequency term of the variance is no longer
    /// negligible, so the f -> 0 approximation underestimates the error.
    #[test]
    fn small_domain_error_exceeds_var_star() {
        let (eps, d, n, reps) = (4.0, 4, 10_000, 50u64);
        let config = ExperimentConfig::new(ProtocolKind::De, eps, d, n).with_seed(5);
        let mean = (0..reps)
            .map(|t| {
                run_trial_with(&config, t, Execution::Parallel)
                    .unwrap()
                    .avg_sq_error
            })
            .sum::<f64>()
            / reps as f64;
        let approx = n as f64 * analytic_var(ProtocolKind::De, eps, d).unwrap();
        assert!(mean > approx, "{mean} vs {approx}");
        let params = config.spec().unwrap().pure_params().unwrap();
        let exact = zipf_pmf(d, 1.1)
            .iter()
            .map(|&f| exact_variance(params, n as f64, f))
            .sum::<f64>()
            / d as f64;
        assert!((mean / exact - 1.0).abs() < 0.15, "{mean} vs {exact}");
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let config = ExperimentConfig::new(ProtocolKind::She, 1.0, 32, 30_000)
            .with_source(DataSource::Uniform)
            .with_seed(99);
        let reference = run_trial_with(&config, 1, Execution::Sequential).unwrap();
        for threads in [1, 2, 7] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let r = pool.install(|| run_trial_with(&config, 1, Execution::Parallel).unwrap());
            assert_eq!(r.avg_sq_error.to_bits(), reference.avg_sq_error.to_bits());
            assert_eq!(r.estimates, reference.estimates);
        }
    }

    #[test]
    fn mean_estimate_tracks_truth_across_repetitions() {
        let (n, reps) = (20_000, 40u64);
        let config = ExperimentConfig::new(ProtocolKind::Oue, 2.0, 16, n).with_seed(8);
        let params = config.spec().unwrap().pure_params().unwrap();
        let mut diff = 0.0;
        let mut var = 0.0;
        for t in 0..reps {
            let r = run_trial_with(&config, t, Execution::Parallel).unwrap();
            assert_eq!(r.true_counts.iter().sum::<u64>(), n as u64);
            diff += r.estimates.estimates[0] - r.true_counts[0] as f64;
            var += exact_variance(params, n as f64, r.true_counts[0] as f64 / n as f64);
        }
        let sd = var.sqrt();
        assert!(diff.abs() < 4.0 * sd, "{diff} vs {sd}");
    }
}
