//! Tricomi's confluent hypergeometric function `U(a, b, z)` (Kummer's `ψ`)
//! for `a > 0`, real `b` and `z > 0`.
//!
//! Two regimes:
//!
//! * Large `z`: the asymptotic expansion
//!   `U ~ z^{−a} Σ (a)_n (a−b+1)_n / n! · (−1/z)^n`, accepted only when it
//!   reaches machine precision with no partial term above [`MAX_ASYMPTOTIC_PEAK`].
//! * Otherwise: the expansion is evaluated for `U` and `U' = −a U(a+1, b+1, ·)`
//!   at a start point `Z` doubled from [`ASYMPTOTIC_START`] until both
//!   qualify, and Kummer's equation `z w'' + (b − z) w' − a w = 0` is carried
//!   inward to `z` by Taylor steps of length `min(z₀/2, 4)` (the only finite
//!   singularity is the origin, so each series converges at least like
//!   `2^{−k}`).
//!
//! For `a > 0`, `U(a, b, ·)` is a Laplace transform of a positive weight and
//! hence completely monotone. Every term of an inward Taylor step is then
//! non-negative, so the continuation sums without cancellation, and `U` is
//! the dominant solution in the inward direction.

use super::{SpecfunConfig, SpecfunResult};
use crate::error::{Error, Result};

/// First start point tried for the inward continuation.
pub const ASYMPTOTIC_START: f64 = 20.0;
/// Largest start point tried before giving up.
const MAX_START: f64 = 1e12;
/// Ratio of Taylor step length to the distance from the origin.
const STEP_FRACTION: f64 = 0.5;
/// Longest Taylor step. The recessive companion solution grows like `e^z`;
/// its alternating Taylor terms reach `e^{|t|}`, which bounds how far
/// rounding noise can be amplified within one step.
const MAX_STEP: f64 = 4.0;
/// Largest partial term tolerated in the alternating asymptotic sum.
pub const MAX_ASYMPTOTIC_PEAK: f64 = 64.0;

pub fn tricomi_u(a: f64, b: f64, z: f64) -> Result<SpecfunResult> {
    tricomi_u_with(a, b, z, &SpecfunConfig::default())
}

pub fn tricomi_u_with(a: f64, b: f64, z: f64, cfg: &SpecfunConfig) -> Result<SpecfunResult> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(
            "tricomi_u",
            format!("a = {a} must be positive and finite"),
        ));
    }
    if !b.is_finite() {
        return Err(Error::domain("tricomi_u", format!("b = {b} must be finite")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::domain(
            "tricomi_u",
            format!("z = {z} must be positive and finite"),
        ));
    }
    let c = a - b + 1.0;

    if let Some((sum, terms)) = asymptotic_sum(a, c, z, cfg) {
        return Ok(SpecfunResult {
            value: sum,
            log_scale: -a * z.ln(),
            converged: true,
            terms_used: terms,
        });
    }

    let mut start = ASYMPTOTIC_START.max(2.0 * z);
    let (s0, s1, mut terms) = loop {
        if start > MAX_START {
            return Ok(SpecfunResult {
                value: f64::NAN,
                log_scale: 0.0,
                converged: false,
                terms_used: 0,
            });
        }
        // U(a+1, b+1, ·) has the same a − b + 1.
        match (asymptotic_sum(a, c, start, cfg), asymptotic_sum(a + 1.0, c, start, cfg)) {
            (Some((s0, t0)), Some((s1, t1))) => break (s0, s1, t0 + t1),
            _ => start *= 2.0,
        }
    };

    // State is (w, w') / exp(log_scale).
    let mut w = s0;
    let mut dw = -a * s1 / start;
    let mut log_scale = -a * start.ln();
    let mut z0 = start;
    let mut converged = true;
    while z0 > z {
        let max_len = (STEP_FRACTION * z0).min(MAX_STEP);
        let last = z0 - z <= max_len;
        let t = if last { z - z0 } else { -max_len };
        let step = taylor_step(a, b, z0, w, dw, t, cfg);
        terms += step.terms;
        converged &= step.converged;
        if !(step.w > 0.0) || !step.w.is_finite() || !step.dw.is_finite() {
            converged = false;
            w = step.w;
            break;
        }
        log_scale += step.w.ln();
        dw = step.dw / step.w;
        w = 1.0;
        z0 = if last { z } else { z0 + t };
    }

    Ok(SpecfunResult {
        value: w,
        log_scale,
        converged,
        terms_used: terms,
    })
}

/// `Σ (a)_n (c)_n / n! · (−1/z)^n` when it converges to working precision
/// with bounded partial terms.
fn asymptotic_sum(a: f64, c: f64, z: f64, cfg: &SpecfunConfig) -> Option<(f64, usize)> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    for n in 0..cfg.max_terms {
        let nf = n as f64;
        let ratio = (a + nf) * (c + nf) / ((nf + 1.0) * z);
        term *= -ratio;
        sum += term;
        if term == 0.0 || term.abs() <= cfg.tol * sum.abs() {
            return Some((sum, n + 1));
        }
        if term.abs() > MAX_ASYMPTOTIC_PEAK {
            return None;
        }
        // Past n ≈ z the ratios exceed one for good: the series has turned.
        if ratio.abs() >= 1.0 && nf >= z {
            return None;
        }
    }
    None
}

struct Step {
    w: f64,
    dw: f64,
    terms: usize,
    converged: bool,
}

/// Advances `(w, w')` from `z0` to `z0 + t` with the Taylor series of
/// Kummer's equation. Works with `d_k = c_k t^k` so no power of `t` is
/// formed explicitly.
fn taylor_step(a: f64, b: f64, z0: f64, w: f64, dw: f64, t: f64, cfg: &SpecfunConfig) -> Step {
    let mut d_prev = w;
    let mut d_cur = dw * t;
    let mut sum_w = d_prev + d_cur;
    // Σ k d_k, divided by t at the end.
    let mut sum_dw = d_cur;
    let mut quiet = 0;
    for k in 0..cfg.max_terms {
        let kf = k as f64;
        let d_next =
            ((kf + a) * d_prev * t * t - (kf + 1.0) * (kf + b - z0) * d_cur * t) / (z0 * (kf + 1.0) * (kf + 2.0));
        sum_w += d_next;
        sum_dw += (kf + 2.0) * d_next;
        let small_w = d_next.abs() <= cfg.tol * sum_w.abs();
        let small_dw = ((kf + 2.0) * d_next).abs() <= cfg.tol * sum_dw.abs();
        if small_w && small_dw {
            quiet += 1;
            if quiet >= 3 {
                return Step {
                    w: sum_w,
                    dw: sum_dw / t,
                    terms: k + 3,
                    converged: true,
                };
            }
        } else {
            quiet = 0;
        }
        d_prev = d_cur;
        d_cur = d_next;
    }
    Step {
        w: sum_w,
        dw: sum_dw / t,
        terms: cfg.max_terms,
        converged: false,
    }
}
