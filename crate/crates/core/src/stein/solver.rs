use serde::Serialize;

use crate::distributions::SteinPair;
use crate::error::{Error, Result};
use crate::numerics::QuadConfig;

use super::anchored::{anchored_integrals, shift_anchor};
use super::grid::validate_grid;
use super::test_function::TestFunction;

/// Points with `s(x) g(x)` below this value are masked and left out of the
/// two-form comparison. There the form that is not used divides a
/// cancelling integral by `s g`, which turns a quadrature error of order
/// `1e-13` in `E h(W)` into a gap above `1e-9`.
pub const MASK_FLOOR: f64 = 1e-4;
/// Relative step for the finite-difference derivative in the residual.
pub const RESIDUAL_REL_STEP: f64 = 1e-5;
/// Tolerance requested for `E h(W)`. Tighter than [`EXPECTATION_ABS_TOL`]
/// because an error `δ` in `E h(W)` shows up as `δ/(s g)` in the gap
/// between the two solution forms.
const EXPECTATION_TIGHT_TOL: f64 = 1e-14;
/// Accuracy `E h(W)` must reach for the result to count as converged.
pub const EXPECTATION_ABS_TOL: f64 = 1e-10;

/// `s(x) f'(x) + τ(x) f(x)`.
#[inline]
pub fn apply_operator<F, D>(pair: &SteinPair, f: F, f_prime: D, x: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    pair.s.eval(x) * f_prime(x) + pair.tau.eval(x) * f(x)
}

/// `E h(W) = ∫₀^∞ h g` by adaptive quadrature.
pub fn expectation(pair: &SteinPair, h: &TestFunction) -> Result<f64> {
    if let Some(c) = h.constant_value() {
        return Ok(c);
    }
    let cfg = QuadConfig::with_tolerances(EXPECTATION_TIGHT_TOL, EXPECTATION_TIGHT_TOL);
    let r = pair.integrate_weighted(|t| h.eval(t), 0.0, f64::INFINITY, &cfg);
    if !r.value.is_finite() || !(r.converged || r.abs_error_estimate <= EXPECTATION_ABS_TOL) {
        return Err(Error::NonConvergence {
            what: format!("E[{}(W)] under {}", h.name(), pair.label),
            estimate: r.value,
            error: r.abs_error_estimate,
        });
    }
    Ok(r.value)
}

/// Which integral supplies the reported value at a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteinSolution {
    pub pair: String,
    pub h: String,
    pub grid: Vec<f64>,
    pub f_values: Vec<f64>,
    pub f_prime_values: Vec<f64>,
    /// `|s f'_fd + τ f − (h − e_h)|` with `f'_fd` differenced numerically.
    pub residuals: Vec<f64>,
    pub masked: Vec<bool>,
    pub forms: Vec<Form>,
    pub e_h: f64,
    pub constant_c: f64,
    pub max_residual: f64,
    /// Largest gap between the two integral forms over unmasked points;
    /// `NaN` when every point is masked.
    pub forms_agreement: f64,
    pub masked_count: usize,
    /// Forward form at or below this point, backward above.
    pub split_point: f64,
    pub converged: bool,
}

impl SteinSolution {
    pub fn sup_abs_f(&self) -> f64 {
        self.f_values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The bounded solution `f_h = (1/(s g)) ∫₀^x g (h − E h(W))`.
pub fn solve_stein_equation(pair: &SteinPair, h: &TestFunction, grid: &[f64]) -> Result<SteinSolution> {
    solve_with_constant(pair, h, 0.0, grid)
}

/// `f_h + C/(s g)`, the general solution of the Stein equation.
pub fn solve_with_constant(pair: &SteinPair, h: &TestFunction, c: f64, grid: &[f64]) -> Result<SteinSolution> {
    validate_grid(grid)?;
    h.check_bounded(grid)?;
    if !c.is_finite() {
        return Err(Error::domain("solve_with_constant", format!("C = {c} must be finite")));
    }
    let e_h = expectation(pair, h)?;
    let phi = |t: f64| h.eval(t) - e_h;
    let scale = grid.iter().fold(0.0f64, |m, &x| m.max(phi(x).abs())).max(1e-300);
    let anchored = anchored_integrals(pair, grid, phi, scale);
    let split = pair.scale();

    let n = grid.len();
    let mut sol = SteinSolution {
        pair: pair.label.clone(),
        h: h.name().to_string(),
        grid: grid.to_vec(),
        f_values: Vec::with_capacity(n),
        f_prime_values: Vec::with_capacity(n),
        residuals: Vec::with_capacity(n),
        masked: Vec::with_capacity(n),
        forms: Vec::with_capacity(n),
        e_h,
        constant_c: c,
        max_residual: 0.0,
        forms_agreement: f64::NAN,
        masked_count: 0,
        split_point: split,
        converged: true,
    };

    for (i, &x) in grid.iter().enumerate() {
        let s = pair.s.eval(x);
        let tau = pair.tau.eval(x);
        let log_sg = pair.log_sg(x);
        let f_fwd = anchored.forward[i] / s;
        let f_bwd = -anchored.backward[i] / s;
        let (form, f0, anchor, sign, ok) = if x <= split {
            (
                Form::Forward,
                f_fwd,
                anchored.forward[i],
                1.0,
                anchored.forward_converged[i],
            )
        } else {
            (
                Form::Backward,
                f_bwd,
                anchored.backward[i],
                -1.0,
                anchored.backward_converged[i],
            )
        };
        sol.converged &= ok;

        let masked = !(log_sg >= MASK_FLOOR.ln()) || !f_fwd.is_finite() || !f_bwd.is_finite();
        if !masked {
            let gap = (f_fwd - f_bwd).abs();
            sol.forms_agreement = if sol.forms_agreement.is_nan() {
                gap
            } else {
                sol.forms_agreement.max(gap)
            };
        }

        let homogeneous = |y: f64| if c == 0.0 { 0.0 } else { c * (-pair.log_sg(y)).exp() };
        let f = f0 + homogeneous(x);
        let f_prime = if c == 0.0 {
            (phi(x) - tau * f) / s
        } else {
            (phi(x) - tau * f0) / s - c * tau / s * (-log_sg).exp()
        };

        let f_at = |y: f64| sign * shift_anchor(pair, &phi, x, anchor, y, sign) / pair.s.eval(y) + homogeneous(y);
        let step = RESIDUAL_REL_STEP * x;
        let d1 = (f_at(x + step) - f_at(x - step)) / (2.0 * step);
        let d2 = (f_at(x + 0.5 * step) - f_at(x - 0.5 * step)) / step;
        let f_prime_fd = (4.0 * d2 - d1) / 3.0;
        let residual = (s * f_prime_fd + tau * f - phi(x)).abs();

        sol.f_values.push(f);
        sol.f_prime_values.push(f_prime);
        sol.residuals.push(residual);
        sol.masked.push(masked);
        sol.forms.push(form);
        if masked {
            sol.masked_count += 1;
        }
        if residual.is_nan() {
            sol.max_residual = f64::NAN;
        } else if residual > sol.max_residual {
            sol.max_residual = residual;
        }
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{gig_stein_pair, kummer_stein_pair, GigParams, KummerParams};
    use crate::stein::grid::standard_grid;

    fn gig(p: f64, a: f64, b: f64) -> SteinPair {
        gig_stein_pair(&GigParams::new(p, a, b).unwrap()).unwrap()
    }

    #[test]
    fn operator_examples() {
        let pair = gig(-1.0, 2.0, 2.0);
        assert_eq!(apply_operator(&pair, |_| 1.0, |_| 0.0, 1.0), 0.0);
        assert_eq!(apply_operator(&pair, |_| 1.0, |_| 0.0, 2.0), -3.0);
        let k = kummer_stein_pair(&KummerParams::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(apply_operator(&k, |x| x, |_| 1.0, 1.0), 1.0);
    }

    #[test]
    fn expectation_pinned() {
        let e = expectation(&gig(-1.0, 2.0, 2.0), &TestFunction::exp_decay()).unwrap();
        assert!((e - 0.499_290_721_230_036_79).abs() < 1e-13, "{e}");
        let e = expectation(&gig(-0.5, 1.0, 1.0), &TestFunction::exp_decay()).unwrap();
        assert!((e - 0.480_921_700_202_632_07).abs() < 1e-13, "{e}");
        assert_eq!(
            expectation(&gig(-0.5, 1.0, 1.0), &TestFunction::constant(7.0)).unwrap(),
            7.0
        );
    }

    #[test]
    fn constant_h_gives_zero_solution() {
        let sol = solve_stein_equation(&gig(-1.0, 2.0, 2.0), &TestFunction::constant(7.0), &standard_grid()).unwrap();
        assert!(sol.f_values.iter().all(|&f| f == 0.0));
        assert_eq!(sol.max_residual, 0.0);
    }

    #[test]
    fn exp_decay_solution_quality() {
        let sol = solve_stein_equation(&gig(-1.0, 2.0, 2.0), &TestFunction::exp_decay(), &standard_grid()).unwrap();
        assert!(sol.converged);
        assert!(sol.forms_agreement < 1e-8, "agreement {}", sol.forms_agreement);
        assert!(sol.max_residual < 1e-6, "residual {}", sol.max_residual);
        assert!(sol.masked_count < 400);
    }

    #[test]
    fn constant_is_linear() {
        let pair = gig(-1.0, 2.0, 2.0);
        let h = TestFunction::exp_decay();
        let grid = [0.01, 0.1, 1.0, 3.0];
        let zero = solve_with_constant(&pair, &h, 0.0, &grid).unwrap();
        let plus = solve_with_constant(&pair, &h, 1.0, &grid).unwrap();
        let minus = solve_with_constant(&pair, &h, -1.0, &grid).unwrap();
        assert_eq!(zero, solve_stein_equation(&pair, &h, &grid).unwrap());
        for i in 0..grid.len() {
            let corr = plus.f_values[i] - zero.f_values[i];
            let lhs = minus.f_values[i];
            let rhs = zero.f_values[i] - corr;
            assert!((lhs - rhs).abs() <= 1e-12 * corr.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn rejects_bad_grid() {
        let pair = gig(-1.0, 2.0, 2.0);
        assert!(solve_stein_equation(&pair, &TestFunction::osc(), &[1.0, 0.5]).is_err());
    }
}
