//! Structural invariants: privacy, protocol comparisons and proptest laws.

use proptest::prelude::*;
use pureldp::analytics::{analytic_var, inv_normal_cdf};
use pureldp::exec::Execution;
use pureldp::framework::{estimate, support_count_with, var_star, PureParams};
use pureldp::protocols::privacy::check_privacy;
use pureldp::protocols::{lh_hash, HashFunctionId, ProtocolKind, ProtocolSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn exhaustive_ldp_direct_and_unary() {
    for eps in [0.25, 1.0, 3.0, 6.0] {
        for d in 2..=8 {
            let c = check_privacy(&ProtocolSpec::new(ProtocolKind::De, eps, d).unwrap()).unwrap();
            assert!(c.passed, "{c:?}");
        }
        for d in 2..=4 {
            for kind in [ProtocolKind::Sue, ProtocolKind::Oue] {
                let c = check_privacy(&ProtocolSpec::new(kind, eps, d).unwrap()).unwrap();
                assert!(c.passed, "{c:?}");
                assert!((c.max_ratio / eps.exp() - 1.0).abs() < 1e-9);
            }
        }
        for kind in [ProtocolKind::Blh, ProtocolKind::Olh] {
            let c = check_privacy(&ProtocolSpec::new(kind, eps, 1024).unwrap()).unwrap();
            assert!(c.passed, "{c:?}");
            assert!((c.max_ratio / eps.exp() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn corrupted_parameters_fail() {
    let base = ProtocolSpec::new(ProtocolKind::De, 1.0, 4).unwrap();
    let bad = base.with_raw_probabilities(0.7, 0.1).unwrap();
    assert!(!check_privacy(&bad).unwrap().passed);
    let olh = ProtocolSpec::new(ProtocolKind::Olh, 1.0, 64).unwrap();
    let (p, q) = olh.rr_probabilities().unwrap();
    let bad = olh.with_raw_probabilities(p * 1.01, q).unwrap();
    assert!(!check_privacy(&bad).unwrap().passed);
}

#[test]
fn oue_equals_olh() {
    for k in 1..=200 {
        let eps = 0.05 * k as f64;
        let a = analytic_var(ProtocolKind::Oue, eps, 2).unwrap();
        let b = analytic_var(ProtocolKind::Olh, eps, 2).unwrap();
        assert!((a / b - 1.0).abs() <= 1e-12);
        // continuous g = e^eps + 1 reproduces the same value through (p*, q*)
        let g = eps.exp() + 1.0;
        let p = eps.exp() / (eps.exp() + g - 1.0);
        let v = var_star(PureParams::new(p, 1.0 / g).unwrap());
        assert!((v / a - 1.0).abs() < 1e-12);
        if eps >= 3f64.ln() {
            let spec = ProtocolSpec::new(ProtocolKind::Olh, eps, 16).unwrap();
            let integer = spec.var_star().unwrap();
            assert!((integer / a - 1.0).abs() < 0.02, "eps {eps}");
        }
    }
}

#[test]
fn the_beats_she() {
    for eps in [0.1, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let the = ProtocolSpec::new(ProtocolKind::The, eps, 8).unwrap();
        assert!(the.var_star().unwrap() < 8.0 / (eps * eps), "eps {eps}");
    }
}

#[test]
fn support_count_independent_of_thread_count() {
    let spec = ProtocolSpec::new(ProtocolKind::Olh, 3.0, 128).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(77);
    let reports: Vec<_> = (0..20_000)
        .map(|u| spec.perturb(u % 128, &mut r).unwrap())
        .collect();
    let seq = support_count_with(&reports, &spec, Execution::Sequential).unwrap();
    for threads in [1, 3, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let par =
            pool.install(|| support_count_with(&reports, &spec, Execution::Parallel).unwrap());
        assert_eq!(seq, par);
    }
}

proptest! {
    #[test]
    fn estimate_is_affine(
        p in 0.51f64..1.0,
        q in 0.001f64..0.5,
        n in 1u64..100_000,
        a in 0u64..100_000,
        b in 0u64..100_000,
    ) {
        let params = PureParams::new(p, q).unwrap();
        let e = estimate(&[a, b, (a + b) / 2], n, params).unwrap().estimates;
        // estimates are affine in counts with slope 1/(p - q)
        prop_assert!(((e[1] - e[0]) - (b as f64 - a as f64) / (p - q)).abs() < 1e-6 * (1.0 + e[1].abs()));
        let anchor = estimate(&[0], n, params).unwrap().estimates[0];
        prop_assert!((anchor + n as f64 * q / (p - q)).abs() < 1e-6 * (1.0 + anchor.abs()));
    }

    #[test]
    fn quantile_antisymmetric(p in 1e-12f64..0.5) {
        let a = inv_normal_cdf(p).unwrap();
        let b = inv_normal_cdf(1.0 - p).unwrap();
        prop_assert!((a + b).abs() < 1e-10);
    }

    #[test]
    fn hash_in_range(seed in any::<u64>(), v in 0usize..1_000_000, g in 2usize..10_000) {
        let h = lh_hash(HashFunctionId(seed), v, g);
        prop_assert!(h < g);
        prop_assert_eq!(h, lh_hash(HashFunctionId(seed), v, g));
    }

    #[test]
    fn analytic_var_positive(eps in 0.01f64..12.0, d in 2usize..5000) {
        for kind in ProtocolKind::ALL {
            prop_assert!(analytic_var(kind, eps, d).unwrap() > 0.0);
        }
    }
}
