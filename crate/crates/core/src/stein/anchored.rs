//! Density-weighted integrals from the origin and to infinity, rescaled by
//! the density at the evaluation point:
//!
//! ```text
//! F(x) = ∫₀^x g(t)/g(x) φ(t) dt,    B(x) = ∫ₓ^∞ g(t)/g(x) φ(t) dt.
//! ```
//!
//! Along an increasing grid both are accumulated panel by panel,
//! `F(xᵢ) = F(xᵢ₋₁) g(xᵢ₋₁)/g(xᵢ) + ∫_{xᵢ₋₁}^{xᵢ} g(t)/g(xᵢ) φ(t) dt`, so
//! neither `g(x)` nor its reciprocal is ever formed.

use crate::distributions::SteinPair;
use crate::numerics::{integrate_with, kronrod21, QuadConfig};

/// Relative accuracy requested on each panel.
const PANEL_REL_TOL: f64 = 1e-13;
/// Absolute accuracy on each panel, relative to `scale·min(s(x), 1)`.
const PANEL_ABS_TOL: f64 = 1e-15;

pub(crate) struct Anchored {
    pub forward: Vec<f64>,
    pub backward: Vec<f64>,
    pub forward_converged: Vec<bool>,
    pub backward_converged: Vec<bool>,
}

/// Weight `g(t)/g(x)` in log space.
#[inline]
fn weight(pair: &SteinPair, t: f64, log_g_x: f64) -> f64 {
    (pair.log_density(t) - log_g_x).exp()
}

fn panel_cfg(pair: &SteinPair, x: f64, scale: f64) -> QuadConfig {
    QuadConfig {
        abs_tol: (PANEL_ABS_TOL * scale * pair.s.eval(x).min(1.0)).max(f64::MIN_POSITIVE),
        rel_tol: PANEL_REL_TOL,
        max_subdivisions: 2000,
        tail_scale: 1.0,
    }
}

/// Decay length of `g` beyond `x`, used as the tail map scale.
fn tail_length(pair: &SteinPair, x: f64) -> f64 {
    let h = 1e-4 * x;
    let slope = (pair.log_density(x + h) - pair.log_density(x - h)) / (2.0 * h);
    if slope < 0.0 && slope.is_finite() {
        (1.0 / -slope).clamp(1e-3 * x, x.max(pair.scale()))
    } else {
        x.max(pair.scale())
    }
}

/// `value · e^{log_factor}`, with zero staying zero when the factor
/// overflows.
#[inline]
fn rescale(value: f64, log_factor: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value * log_factor.exp()
    }
}

/// `scale` is a magnitude for `φ` (such as its grid maximum) that sets the
/// absolute tolerance.
pub(crate) fn anchored_integrals<P>(pair: &SteinPair, grid: &[f64], phi: P, scale: f64) -> Anchored
where
    P: Fn(f64) -> f64,
{
    let n = grid.len();
    let log_g: Vec<f64> = grid.iter().map(|&x| pair.log_density(x)).collect();
    let mut forward = vec![0.0; n];
    let mut backward = vec![0.0; n];
    let mut forward_converged = vec![true; n];
    let mut backward_converged = vec![true; n];

    let mut prev = 0.0;
    let mut prev_ok = true;
    for i in 0..n {
        let x = grid[i];
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        let carried = if i == 0 {
            0.0
        } else {
            rescale(prev, log_g[i - 1] - log_g[i])
        };
        let cfg = panel_cfg(pair, x, scale);
        let panel = integrate_with(|t| weight(pair, t, log_g[i]) * phi(t), lo, x, &cfg);
        prev = carried + panel.value;
        prev_ok &= panel.converged;
        forward[i] = prev;
        forward_converged[i] = prev_ok;
    }

    let mut next = 0.0;
    let mut next_ok = true;
    for i in (0..n).rev() {
        let x = grid[i];
        let cfg = panel_cfg(pair, x, scale);
        let (carried, panel) = if i == n - 1 {
            let cfg = cfg.tail_scale(tail_length(pair, x));
            (
                0.0,
                integrate_with(|t| weight(pair, t, log_g[i]) * phi(t), x, f64::INFINITY, &cfg),
            )
        } else {
            let carried = rescale(next, log_g[i + 1] - log_g[i]);
            (
                carried,
                integrate_with(|t| weight(pair, t, log_g[i]) * phi(t), x, grid[i + 1], &cfg),
            )
        };
        next = carried + panel.value;
        next_ok &= panel.converged;
        backward[i] = next;
        backward_converged[i] = next_ok;
    }

    Anchored {
        forward,
        backward,
        forward_converged,
        backward_converged,
    }
}

/// Re-anchors `F(x) = value` (`sign = +1`) or `B(x) = value` (`sign = −1`)
/// at a nearby point `y`.
pub(crate) fn shift_anchor<P>(pair: &SteinPair, phi: &P, x: f64, value: f64, y: f64, sign: f64) -> f64
where
    P: Fn(f64) -> f64,
{
    let log_g_y = pair.log_density(y);
    let carried = rescale(value, pair.log_density(x) - log_g_y);
    let (piece, _) = kronrod21(|t| weight(pair, t, log_g_y) * phi(t), x, y);
    carried + sign * piece
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{gig_stein_pair, GigParams};

    #[test]
    fn forward_plus_backward_is_total_mass() {
        let pair = gig_stein_pair(&GigParams::new(-1.0, 2.0, 2.0).unwrap()).unwrap();
        let grid = [0.2, 0.5, 1.0, 2.0, 4.0];
        let a = anchored_integrals(&pair, &grid, |_| 1.0, 1.0);
        for (i, &x) in grid.iter().enumerate() {
            let total = (a.forward[i] + a.backward[i]) * pair.density(x);
            assert!((total - 1.0).abs() < 1e-12, "x = {x}: {total}");
        }
        assert!(a.forward_converged.iter().chain(&a.backward_converged).all(|&c| c));
    }

    #[test]
    fn shifting_matches_direct_evaluation() {
        let pair = gig_stein_pair(&GigParams::new(-1.0, 2.0, 2.0).unwrap()).unwrap();
        let a = anchored_integrals(&pair, &[0.5, 0.6], |_| 1.0, 1.0);
        let moved = shift_anchor(&pair, &|_| 1.0, 0.5, a.forward[0], 0.6, 1.0);
        assert!((moved - a.forward[1]).abs() < 1e-13 * a.forward[1]);
        let back = shift_anchor(&pair, &|_| 1.0, 0.6, a.backward[1], 0.5, -1.0);
        assert!((back - a.backward[0]).abs() < 1e-13 * a.backward[0]);
    }
}
