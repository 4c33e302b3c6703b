use serde::Serialize;

use crate::distributions::{tau_zero, SteinPair};
use crate::error::{Error, Result};
use crate::numerics::{differentiate, integrate_with, QuadConfig};

use super::anchored::anchored_integrals;
use super::grid::validate_grid;
use super::solver::SteinSolution;

/// Grid points within this distance of `α` are left out of the tail
/// inequality sweeps.
pub const LEMMA_ALPHA_WINDOW: f64 = 1e-6;
/// Quadrature slack allowed in the tail inequalities.
pub const LEMMA_SLACK: f64 = 1e-9;
/// Relative slack in the monotone-ratio checks.
const RATIO_MONOTONE_SLACK: f64 = 1e-12;
/// Regularizer of the structural check near zeros of `τ`, in units of
/// `1/x` (the natural size of a logarithmic derivative).
const STRUCTURAL_FLOOR: f64 = 1e-3;
const STRUCTURAL_REL_STEP: f64 = 1e-5;
const BOUND_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub pair: String,
    pub alpha: f64,
    /// `(1/(s(α) g(α))) ∫₀^α g`.
    pub left_ratio: f64,
    /// `(1/(s(α) g(α))) ∫_α^∞ g`.
    pub right_ratio: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub hypothesis: String,
}

/// The constant `M` with `‖f_h‖ ≤ M ‖h − E h(W)‖` for bounded `h`.
pub fn bound_m(pair: &SteinPair) -> Result<BoundReport> {
    let alpha = tau_zero(pair)?;
    let decay = check_boundary_decay(pair);
    if !decay.passed {
        return Err(Error::Precondition(format!(
            "s·g does not decay monotonically at the boundary for {}",
            pair.label
        )));
    }
    let log_g_alpha = pair.log_density(alpha);
    let weight = |t: f64| (pair.log_density(t) - log_g_alpha).exp();
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: BOUND_REL_TOL,
        max_subdivisions: 4000,
        tail_scale: alpha,
    };
    let left = integrate_with(weight, 0.0, alpha, &cfg);
    let right = integrate_with(weight, alpha, f64::INFINITY, &cfg);
    for (side, r) in [("left", &left), ("right", &right)] {
        if !r.converged || !(r.value > 0.0) || !r.value.is_finite() {
            return Err(Error::NonConvergence {
                what: format!("{side} bound ratio for {}", pair.label),
                estimate: r.value,
                error: r.abs_error_estimate,
            });
        }
    }
    let s_alpha = pair.s.eval(alpha);
    let left_ratio = left.value / s_alpha;
    let right_ratio = right.value / s_alpha;
    Ok(BoundReport {
        pair: pair.label.clone(),
        alpha,
        left_ratio,
        right_ratio,
        m: left_ratio.max(right_ratio),
        hypothesis: pair.hypothesis.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryDecayReport {
    /// `s(x) g(x)` at `x = 1e-8`.
    pub sg_near_zero: f64,
    /// `s(x) g(x)` at `x = 1e3`.
    pub sg_far: f64,
    /// `s·g` strictly decreases along a geometric sequence from the mode
    /// down to `1e-8`.
    pub decreasing_toward_zero: bool,
    /// Same, from the mode up to `1e3` (or further if the mode is large).
    pub decreasing_toward_infinity: bool,
    pub passed: bool,
}

pub fn check_boundary_decay(pair: &SteinPair) -> BoundaryDecayReport {
    let peak = pair.scale();
    let monotone = |from: f64, to: f64| {
        let steps = 64;
        let ratio = (to / from).powf(1.0 / steps as f64);
        let mut x = from;
        let mut prev = pair.log_sg(x);
        for _ in 0..steps {
            x *= ratio;
            let v = pair.log_sg(x);
            // Once s·g underflows in log space it stays at −∞.
            if !(v < prev) && !(v == f64::NEG_INFINITY && prev == f64::NEG_INFINITY) {
                return false;
            }
            prev = v;
        }
        true
    };
    let toward_zero = peak <= 1e-8 || monotone(peak * 0.5, 1e-8);
    let far = 1e3f64.max(16.0 * peak);
    let toward_inf = monotone(peak * 2.0, far);
    BoundaryDecayReport {
        sg_near_zero: pair.log_sg(1e-8).exp(),
        sg_far: pair.log_sg(1e3).exp(),
        decreasing_toward_zero: toward_zero,
        decreasing_toward_infinity: toward_inf,
        passed: toward_zero && toward_inf,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructuralReport {
    pub pair: String,
    /// Largest `|(s g)'/(s g) − τ/s| / (|τ/s| + 1e-3/x)` over the grid.
    pub max_rel_error: f64,
    pub worst_x: f64,
    pub tol: f64,
    pub passed: bool,
}

/// Checks `(s g)' = τ g` on a grid. The derivative of `ln(s g)` is taken
/// by central differences with step `1e-5·x` and compared with `τ/s`; this
/// is the same relative error as comparing `(s g)'` with `τ g`, without the
/// underflow of `g` in the tails.
pub fn check_structural_identity(pair: &SteinPair, grid: &[f64], tol: f64) -> StructuralReport {
    let mut worst = 0.0f64;
    let mut worst_x = f64::NAN;
    for &x in grid {
        let d = differentiate(|y| pair.log_sg(y), x, STRUCTURAL_REL_STEP);
        let want = pair.tau.eval(x) / pair.s.eval(x);
        let err = (d - want).abs() / (want.abs() + STRUCTURAL_FLOOR / x);
        if err.is_nan() || err > worst {
            worst = if err.is_nan() { f64::INFINITY } else { err };
            worst_x = x;
        }
    }
    StructuralReport {
        pair: pair.label.clone(),
        max_rel_error: worst,
        worst_x,
        tol,
        passed: worst < tol,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub pair: String,
    pub alpha: f64,
    pub lower_points: usize,
    pub upper_points: usize,
    pub excluded_points: usize,
    /// Largest `τ(x) ∫₀^x g / (s(x) g(x))` over grid points below `α`;
    /// at most one when the inequality holds.
    pub max_lower_ratio: f64,
    /// Largest `−τ(x) ∫_x^∞ g / (s(x) g(x))` over grid points above `α`.
    pub max_upper_ratio: f64,
    pub inequalities_hold: bool,
    /// `(1/(s g)) ∫₀^x g` nondecreasing below `α`.
    pub lower_ratio_monotone: bool,
    /// `(1/(s g)) ∫_x^∞ g` nonincreasing above `α`.
    pub upper_ratio_monotone: bool,
    pub passed: bool,
}

/// The tail inequalities `∫₀^x g ≤ s g/τ` (below `α`) and
/// `∫_x^∞ g ≤ −s g/τ` (above `α`), and monotonicity of the ratios
/// `(1/(s g)) ∫₀^x g` and `(1/(s g)) ∫_x^∞ g` on their sides of `α`.
pub fn check_lemma_inequalities(pair: &SteinPair, grid: &[f64]) -> Result<LemmaReport> {
    let alpha = tau_zero(pair)?;
    validate_grid(grid)?;
    let anchored = anchored_integrals(pair, grid, |_| 1.0, 1.0);
    let mut report = LemmaReport {
        pair: pair.label.clone(),
        alpha,
        lower_points: 0,
        upper_points: 0,
        excluded_points: 0,
        max_lower_ratio: 0.0,
        max_upper_ratio: 0.0,
        inequalities_hold: true,
        lower_ratio_monotone: true,
        upper_ratio_monotone: true,
        passed: false,
    };
    let mut prev_lower: Option<f64> = None;
    let mut prev_upper: Option<f64> = None;
    for (i, &x) in grid.iter().enumerate() {
        if (x - alpha).abs() <= LEMMA_ALPHA_WINDOW {
            report.excluded_points += 1;
            continue;
        }
        let s = pair.s.eval(x);
        let tau = pair.tau.eval(x);
        // Slack `LEMMA_SLACK` on the unscaled inequality, capped so it never
        // exceeds the same fraction of the right-hand side.
        let rhs_unscaled = (pair.log_sg(x) - tau.abs().ln()).exp();
        let slack = LEMMA_SLACK * rhs_unscaled.recip().min(1.0);
        if x < alpha {
            report.lower_points += 1;
            let l = anchored.forward[i] / s;
            let ratio = tau * l;
            report.max_lower_ratio = report.max_lower_ratio.max(ratio);
            report.inequalities_hold &= ratio <= 1.0 + slack;
            if let Some(p) = prev_lower {
                report.lower_ratio_monotone &= l >= p * (1.0 - RATIO_MONOTONE_SLACK);
            }
            prev_lower = Some(l);
        } else {
            report.upper_points += 1;
            let u = anchored.backward[i] / s;
            let ratio = -tau * u;
            report.max_upper_ratio = report.max_upper_ratio.max(ratio);
            report.inequalities_hold &= ratio <= 1.0 + slack;
            if let Some(p) = prev_upper {
                report.upper_ratio_monotone &= u <= p * (1.0 + RATIO_MONOTONE_SLACK);
            }
            prev_upper = Some(u);
        }
    }
    report.passed = report.inequalities_hold && report.lower_ratio_monotone && report.upper_ratio_monotone;
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub sup_abs_f: f64,
    /// Grid estimate of `‖h − E h(W)‖`.
    pub centered_sup_norm: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub bound: f64,
    /// `sup |f| / (M ‖h − E h(W)‖)`; reported, not asserted.
    pub tightness: f64,
    pub passed: bool,
}

/// `sup |f_h| ≤ M ‖h − E h(W)‖` over the solution grid, up to `1e-12`.
pub fn check_solution_bound(solution: &SteinSolution, bound: &BoundReport, centered_sup_norm: f64) -> BoundCheck {
    let sup = solution.sup_abs_f();
    let limit = bound.m * centered_sup_norm;
    BoundCheck {
        sup_abs_f: sup,
        centered_sup_norm,
        m: bound.m,
        bound: limit,
        tightness: if limit > 0.0 { sup / limit } else { f64::NAN },
        passed: sup <= limit + 1e-12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{gig_stein_pair, kummer_stein_pair, GigParams, KummerParams, Quadratic};
    use crate::stein::grid::standard_grid;

    fn gig(p: f64, a: f64, b: f64) -> SteinPair {
        gig_stein_pair(&GigParams::new(p, a, b).unwrap()).unwrap()
    }

    fn kummer(a: f64, b: f64, c: f64) -> SteinPair {
        kummer_stein_pair(&KummerParams::new(a, b, c).unwrap()).unwrap()
    }

    #[test]
    fn golden_bounds() {
        let r = bound_m(&gig(-1.0, 2.0, 2.0)).unwrap();
        assert_eq!(r.alpha, 1.0);
        assert!((r.left_ratio - 1.533_476_847_068_688_6).abs() < 1e-12, "{r:?}");
        assert!((r.right_ratio - 0.533_476_847_068_688_6).abs() < 1e-12, "{r:?}");
        assert_eq!(r.m, r.left_ratio);

        let r = bound_m(&kummer(1.0, 1.0, 1.0)).unwrap();
        assert!((r.alpha - 0.618_033_988_749_894_8).abs() < 1e-15);
        assert!((r.left_ratio - 1.452_513_038_538_231_7).abs() < 1e-12, "{r:?}");
        assert!((r.right_ratio - 0.508_099_727_803_711_3).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn bound_refuses_outside_hypothesis() {
        match bound_m(&gig(0.0, 1.0, 1.0)) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("p ≤ −1"), "{msg}"),
            other => panic!("{other:?}"),
        }
        match bound_m(&kummer(1.0, -0.5, 1.0)) {
            Err(Error::Precondition(msg)) => assert!(msg.contains("1 − b − c ≤ 0"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_identity_detects_corruption() {
        let grid = standard_grid();
        assert!(check_structural_identity(&gig(-0.5, 1.0, 1.0), &grid, 1e-6).passed);
        assert!(check_structural_identity(&kummer(2.0, 1.0, 3.0), &grid, 1e-6).passed);
        let pair = gig(-1.0, 2.0, 2.0);
        let bad = pair.with_tau(Quadratic::new(pair.tau.c0 + 0.1, pair.tau.c1, pair.tau.c2));
        let r = check_structural_identity(&bad, &grid, 1e-6);
        assert!(!r.passed && r.max_rel_error > 1e-3, "{r:?}");
    }

    #[test]
    fn lemma_holds_for_reference_pairs() {
        let grid = standard_grid();
        for pair in [gig(-1.0, 2.0, 2.0), kummer(1.0, 1.0, 1.0)] {
            let r = check_lemma_inequalities(&pair, &grid).unwrap();
            assert!(r.passed, "{r:?}");
            assert!(r.lower_points > 0 && r.upper_points > 0);
        }
        assert!(check_lemma_inequalities(&gig(0.0, 1.0, 1.0), &grid).is_err());
    }

    #[test]
    fn alpha_on_grid_is_excluded() {
        let pair = gig(-1.0, 2.0, 2.0);
        let r = check_lemma_inequalities(&pair, &[0.5, 1.0, 2.0]).unwrap();
        assert_eq!(r.excluded_points, 1);
        assert_eq!((r.lower_points, r.upper_points), (1, 1));
    }

    #[test]
    fn boundary_decay() {
        let r = check_boundary_decay(&gig(-1.0, 2.0, 2.0));
        assert!(r.passed && r.sg_near_zero < 1e-12 && r.sg_far < 1e-12, "{r:?}");
        let r = check_boundary_decay(&kummer(2.0, 1.0, 3.0));
        assert!(r.passed && r.sg_near_zero < 1e-12 && r.sg_far < 1e-12, "{r:?}");
    }
}
