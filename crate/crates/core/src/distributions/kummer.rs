use std::sync::Arc;

use serde::Serialize;

use super::pair::{Quadratic, SteinPair};
use super::params::KummerParams;
use crate::error::{Error, Result};
use crate::numerics::{integrate_with, QuadConfig};
use crate::specfun::{log_gamma, tricomi_u};

/// Relative tolerance for the quadrature normalizer.
const NORMALIZER_REL_TOL: f64 = 1e-13;

fn log_kernel(a: f64, b: f64, c: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    (a - 1.0) * x.ln() - (a + b) * x.ln_1p() - c * x
}

/// Positive zero of `τ(x) = a + (1−b−c) x − c x²`; always exists for
/// `a, c > 0`.
fn tau_root(a: f64, b: f64, c: f64) -> f64 {
    let q = 1.0 - b - c;
    let disc = (q * q + 4.0 * a * c).sqrt();
    if q <= 0.0 {
        2.0 * a / (disc - q)
    } else {
        (q + disc) / (2.0 * c)
    }
}

/// `(1 − b − c + √((1−b−c)² + 4ac)) / (2c)`, in the same rationalized
/// form as [`gig_alpha_closed_form`] when `1 − b − c < 0`.
pub fn kummer_alpha_closed_form(params: &KummerParams) -> f64 {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let q = 1.0 - b - c;
    let disc = (q * q + 4.0 * a * c).sqrt();
    if q < 0.0 {
        2.0 * a / (disc - q)
    } else {
        (q + disc) / (2.0 * c)
    }
}

/// `ln N` with `N = ∫₀^∞ x^{a−1} (1+x)^{−a−b} e^{−c x} dx`, by quadrature.
/// The kernel is shifted by its log at the zero of `τ` (where `s·g` peaks)
/// so the integrand stays near unit scale.
pub(crate) fn kummer_log_normalizer(params: &KummerParams) -> Result<f64> {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let split = tau_root(a, b, c);
    let shift = log_kernel(a, b, c, split);
    let integrand = |x: f64| (log_kernel(a, b, c, x) - shift).exp();
    let cfg = QuadConfig {
        abs_tol: 0.0,
        rel_tol: NORMALIZER_REL_TOL,
        max_subdivisions: 4000,
        tail_scale: split,
    };
    let left = integrate_with(integrand, 0.0, split, &cfg);
    let right = integrate_with(integrand, split, f64::INFINITY, &cfg);
    let total = left.value + right.value;
    let err = left.abs_error_estimate + right.abs_error_estimate;
    let accurate = err <= 1e-10 * total.abs();
    if !(total > 0.0) || !total.is_finite() || !accurate {
        return Err(Error::NonConvergence {
            what: format!("Kummer normalizer for a={a}, b={b}, c={c}"),
            estimate: total,
            error: err,
        });
    }
    Ok(total.ln() + shift)
}

pub fn kummer_log_density(params: &KummerParams, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "kummer_log_density",
            format!("x = {x} must be positive and finite"),
        ));
    }
    let ln_n = kummer_log_normalizer(params)?;
    Ok(log_kernel(params.a(), params.b(), params.c(), x) - ln_n)
}

/// `s(x) = x(1+x)`, `τ(x) = a + (1−b−c) x − c x²`.
pub fn kummer_stein_pair(params: &KummerParams) -> Result<SteinPair> {
    let (a, b, c) = (params.a(), params.b(), params.c());
    let ln_n = kummer_log_normalizer(params)?;
    let log_density = Arc::new(move |x: f64| log_kernel(a, b, c, x) - ln_n);
    Ok(SteinPair::new(
        format!("kummer(a={a}, b={b}, c={c})"),
        Quadratic::new(0.0, 1.0, 1.0),
        Quadratic::new(a, 1.0 - b - c, -c),
        log_density,
        ln_n,
        "1 − b − c ≤ 0",
    ))
}

/// The normalizer by quadrature next to the two closed forms in circulation:
/// `Γ(a) U(a, 1−b, c)`, which matches the `(1+x)^{−a−b}` kernel, and
/// `Γ(a) U(a, a−b+1, c)`, which does not in general.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KummerNormalizerReport {
    pub quadrature: f64,
    pub gamma_u_one_minus_b: f64,
    pub rel_diff_one_minus_b: f64,
    pub gamma_u_a_minus_b_plus_one: f64,
    pub rel_diff_a_minus_b_plus_one: f64,
}

impl KummerNormalizerReport {
    pub fn compute(params: &KummerParams) -> Result<Self> {
        let (a, b, c) = (params.a(), params.b(), params.c());
        let ln_quad = kummer_log_normalizer(params)?;
        let lg = log_gamma(a)?;
        let consistent = tricomi_u(a, 1.0 - b, c)?;
        let printed = tricomi_u(a, a - b + 1.0, c)?;
        let rel = |ln_other: f64| (ln_other - ln_quad).exp_m1().abs();
        let ln_consistent = lg + consistent.ln();
        let ln_printed = lg + printed.ln();
        Ok(Self {
            quadrature: ln_quad.exp(),
            gamma_u_one_minus_b: ln_consistent.exp(),
            rel_diff_one_minus_b: if consistent.converged {
                rel(ln_consistent)
            } else {
                f64::NAN
            },
            gamma_u_a_minus_b_plus_one: ln_printed.exp(),
            rel_diff_a_minus_b_plus_one: if printed.converged { rel(ln_printed) } else { f64::NAN },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::tau_zero;
    use crate::numerics::find_root;

    fn params(a: f64, b: f64, c: f64) -> KummerParams {
        KummerParams::new(a, b, c).unwrap()
    }

    #[test]
    fn density_at_one_for_unit_exponential_weight() {
        let v = kummer_log_density(&params(1.0, 0.0, 1.0), 1.0).unwrap().exp();
        assert!((v - 0.308_443_924_140_363_54).abs() < 1e-13, "{v}");
    }

    #[test]
    fn density_ratio_matches_kernel() {
        let pr = params(2.0, 1.0, 1.0);
        let (x, y) = (0.7, 3.1);
        let lhs = kummer_log_density(&pr, x).unwrap() - kummer_log_density(&pr, y).unwrap();
        let rhs = log_kernel(2.0, 1.0, 1.0, x) - log_kernel(2.0, 1.0, 1.0, y);
        assert!((lhs - rhs).abs() < 1e-14);
    }

    #[test]
    fn normalizer_report_prefers_one_minus_b() {
        let rep = KummerNormalizerReport::compute(&params(1.0, 1.0, 1.0)).unwrap();
        assert!((rep.quadrature - 0.403_652_637_676_805_93).abs() < 1e-12);
        assert!(rep.rel_diff_one_minus_b < 1e-10);
        assert!(rep.rel_diff_a_minus_b_plus_one > 0.1);

        // negative b
        let rep = KummerNormalizerReport::compute(&params(2.5, -1.0, 0.7)).unwrap();
        assert!(rep.rel_diff_one_minus_b < 1e-10, "{rep:?}");
    }

    #[test]
    fn pair_coefficients_and_alpha() {
        let pr = params(1.0, 1.0, 1.0);
        let pair = kummer_stein_pair(&pr).unwrap();
        assert_eq!(pair.s, Quadratic::new(0.0, 1.0, 1.0));
        assert_eq!(pair.tau, Quadratic::new(1.0, -1.0, -1.0));
        let alpha = tau_zero(&pair).unwrap();
        assert!((alpha - 0.618_033_988_749_894_8).abs() < 1e-15);
        let oracle = find_root(|x| pair.tau.eval(x), 1e-6, 100.0, 1e-15).unwrap();
        assert!((alpha - oracle).abs() < 1e-10 * oracle);
        assert!((kummer_alpha_closed_form(&pr) - alpha).abs() < 1e-15);

        let pair = kummer_stein_pair(&params(1.0, 0.0, 1.0)).unwrap();
        assert!(pair.monotone_tau);
        assert_eq!(tau_zero(&pair).unwrap(), 1.0);
    }

    #[test]
    fn non_monotone_regime_keeps_alpha() {
        let pair = kummer_stein_pair(&params(1.0, -0.5, 1.0)).unwrap();
        assert!(!pair.monotone_tau);
        let alpha = pair.alpha.unwrap();
        assert!(pair.tau.eval(alpha).abs() < 1e-14);
        assert_eq!(pair.tau.eval(0.0), 1.0);
    }
}
