use proptest::prelude::*;

use stein_core::distributions::{
    gig_alpha_closed_form, kummer_alpha_closed_form, FamilyParams, GigParams, KummerParams, SteinPair,
};
use stein_core::numerics::{find_root, integrate_with, QuadConfig};
use stein_core::stein::{
    bound_m, check_lemma_inequalities, check_solution_bound, check_structural_identity, solve_stein_equation,
    solve_with_constant, GridSpec, Spacing, TestFunction,
};

fn brent_alpha(pair: &SteinPair) -> f64 {
    let tau = pair.tau;
    let mut hi = 1.0;
    while tau.eval(hi) > 0.0 {
        hi *= 2.0;
    }
    find_root(|x| tau.eval(x), 0.0, hi, 1e-15 * hi).unwrap()
}

fn gig_pair(p: f64, a: f64, b: f64) -> (GigParams, SteinPair) {
    let params = GigParams::new(p, a, b).unwrap();
    (params, FamilyParams::from(params).stein_pair().unwrap())
}

fn kummer_pair(a: f64, b: f64, c: f64) -> (KummerParams, SteinPair) {
    let params = KummerParams::new(a, b, c).unwrap();
    (params, FamilyParams::from(params).stein_pair().unwrap())
}

fn small_grid() -> Vec<f64> {
    GridSpec::new(1e-3, 50.0, 80, Spacing::Log).unwrap().points()
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

/// Kummer parameters with 1 − b − c ≤ 0.
fn monotone_kummer() -> impl Strategy<Value = (f64, f64, f64)> {
    (log_uniform(0.1, 10.0), log_uniform(0.05, 10.0), 0.0..6.0f64).prop_map(|(a, c, excess)| (a, 1.0 - c + excess, c))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gig_alpha_closed_form_matches_root_finder(p in -12.0..-1.0f64, a in log_uniform(0.05, 20.0), b in log_uniform(0.05, 20.0)) {
        let (params, pair) = gig_pair(p, a, b);
        let closed = gig_alpha_closed_form(&params);
        prop_assert!(pair.monotone_tau);
        prop_assert!(((closed - brent_alpha(&pair)) / closed).abs() < 1e-10);
        prop_assert!(((pair.alpha.unwrap() - closed) / closed).abs() < 1e-12);
    }

    #[test]
    fn kummer_alpha_closed_form_matches_root_finder((a, b, c) in monotone_kummer()) {
        let (params, pair) = kummer_pair(a, b, c);
        let closed = kummer_alpha_closed_form(&params);
        prop_assert!(pair.monotone_tau);
        prop_assert!(((closed - brent_alpha(&pair)) / closed).abs() < 1e-10);
        prop_assert!(((pair.alpha.unwrap() - closed) / closed).abs() < 1e-12);
    }

    #[test]
    fn monotone_flag_tracks_hypothesis(p in -5.0..5.0f64, b in -5.0..5.0f64, c in 0.1..5.0f64) {
        prop_assert_eq!(gig_pair(p, 1.0, 1.0).1.monotone_tau, p <= -1.0);
        prop_assert_eq!(kummer_pair(1.0, b, c).1.monotone_tau, 1.0 - b - c <= 0.0);
    }

    #[test]
    fn quadrature_is_additive_over_splits(p in -4.0..4.0f64, a in log_uniform(0.2, 5.0), b in log_uniform(0.2, 5.0), split in log_uniform(0.01, 20.0)) {
        let (_, pair) = gig_pair(p, a, b);
        let g = |x: f64| pair.density(x);
        let cfg = QuadConfig::with_tolerances(1e-14, 1e-13).tail_scale(pair.scale());
        let whole = integrate_with(g, 0.0, f64::INFINITY, &cfg).value;
        let parts = integrate_with(g, 0.0, split, &cfg).value + integrate_with(g, split, f64::INFINITY, &cfg).value;
        prop_assert!((whole - parts).abs() < 1e-10);
        prop_assert!((whole - 1.0).abs() < 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn structural_identity_holds(p in -6.0..6.0f64, a in log_uniform(0.1, 10.0), b in log_uniform(0.1, 10.0), ka in log_uniform(0.1, 8.0), kb in -5.0..5.0f64, kc in log_uniform(0.1, 8.0)) {
        let grid = small_grid();
        let (_, g) = gig_pair(p, a, b);
        let (_, k) = kummer_pair(ka, kb, kc);
        prop_assert!(check_structural_identity(&g, &grid, 1e-6).passed);
        prop_assert!(check_structural_identity(&k, &grid, 1e-6).passed);
    }

    #[test]
    fn solution_respects_bound((a, b, c) in monotone_kummer(), p in -6.0..-1.0f64, ga in log_uniform(0.2, 5.0), gb in log_uniform(0.2, 5.0)) {
        let grid = small_grid();
        for pair in [kummer_pair(a, b, c).1, gig_pair(p, ga, gb).1] {
            let bound = bound_m(&pair).unwrap();
            for h in TestFunction::builtins(&pair) {
                let sol = solve_stein_equation(&pair, &h, &grid).unwrap();
                prop_assert!(sol.max_residual < 1e-6, "{} {}: residual {}", pair.label, h.name(), sol.max_residual);
                let check = check_solution_bound(&sol, &bound, h.centered_sup_norm(&grid, sol.e_h));
                prop_assert!(check.passed, "{} {}: {:?}", pair.label, h.name(), check);
            }
        }
    }

    #[test]
    fn tail_inequalities_hold((a, b, c) in monotone_kummer(), p in -8.0..-1.0f64, ga in log_uniform(0.1, 10.0), gb in log_uniform(0.1, 10.0)) {
        let grid = small_grid();
        for pair in [kummer_pair(a, b, c).1, gig_pair(p, ga, gb).1] {
            let r = check_lemma_inequalities(&pair, &grid).unwrap();
            prop_assert!(r.passed, "{:?}", r);
        }
    }

    #[test]
    fn free_constant_enters_linearly(c in -3.0..3.0f64, a in log_uniform(0.5, 4.0), kb in -1.0..3.0f64, kc in log_uniform(0.3, 4.0)) {
        let grid = small_grid();
        let (_, pair) = kummer_pair(a, kb, kc);
        let h = TestFunction::builtin("osc", &pair).unwrap();
        let base = solve_stein_equation(&pair, &h, &grid).unwrap();
        let shifted = solve_with_constant(&pair, &h, c, &grid).unwrap();
        for (i, &x) in grid.iter().enumerate() {
            let extra = c * (-pair.log_sg(x)).exp();
            let diff = shifted.f_values[i] - base.f_values[i];
            prop_assert!((diff - extra).abs() <= 1e-9 * extra.abs().max(1.0));
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), p in -3.0..3.0f64, ka in log_uniform(0.2, 5.0), kb in -4.0..4.0f64) {
        let params: [FamilyParams; 2] = [
            GigParams::new(p, 1.5, 0.8).unwrap().into(),
            KummerParams::new(ka, kb, 1.2).unwrap().into(),
        ];
        for params in params {
            let x = params.sample(500, seed).unwrap();
            let y = params.sample(500, seed).unwrap();
            prop_assert_eq!(&x.values, &y.values);
            prop_assert!(x.values.iter().all(|v| *v > 0.0 && v.is_finite()));
        }
    }
}
