use std::sync::Arc;

use super::pair::{Quadratic, SteinPair};
use super::params::GigParams;
use crate::error::{Error, Result};
use crate::specfun::bessel_k;

/// `ln Z` with `Z = 2 K_p(√(ab)) (b/a)^{p/2}`, the normalizer of
/// `x^{p−1} e^{−(a x + b/x)/2}`.
pub(crate) fn gig_log_normalizer(params: &GigParams) -> Result<f64> {
    let (p, a, b) = (params.p(), params.a(), params.b());
    let omega = (a * b).sqrt();
    let k = bessel_k(p, omega)?;
    if !k.converged {
        return Err(Error::NonConvergence {
            what: format!("K_{p}({omega})"),
            estimate: k.to_f64(),
            error: f64::NAN,
        });
    }
    Ok(std::f64::consts::LN_2 + k.ln() - 0.5 * p * (a / b).ln())
}

fn log_kernel(p: f64, a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    (p - 1.0) * x.ln() - 0.5 * (a * x + b / x)
}

pub fn gig_log_density(params: &GigParams, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "gig_log_density",
            format!("x = {x} must be positive and finite"),
        ));
    }
    let ln_z = gig_log_normalizer(params)?;
    Ok(log_kernel(params.p(), params.a(), params.b(), x) - ln_z)
}

/// `s(x) = x²`, `τ(x) = b/2 + (p+1) x − (a/2) x²`.
pub fn gig_stein_pair(params: &GigParams) -> Result<SteinPair> {
    let (p, a, b) = (params.p(), params.a(), params.b());
    let ln_z = gig_log_normalizer(params)?;
    let log_density = Arc::new(move |x: f64| log_kernel(p, a, b, x) - ln_z);
    Ok(SteinPair::new(
        format!("gig(p={p}, a={a}, b={b})"),
        Quadratic::new(0.0, 0.0, 1.0),
        Quadratic::new(0.5 * b, p + 1.0, -0.5 * a),
        log_density,
        ln_z,
        "p ≤ −1",
    ))
}

/// `(p + 1 + √((p+1)² + ab)) / a`, rationalized to `b / (√(…) − (p+1))`
/// when `p + 1 < 0` to avoid cancellation.
pub fn gig_alpha_closed_form(params: &GigParams) -> f64 {
    let (p, a, b) = (params.p(), params.a(), params.b());
    let q = p + 1.0;
    let disc = (q * q + a * b).sqrt();
    if q < 0.0 {
        b / (disc - q)
    } else {
        (q + disc) / a
    }
}
