use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_with, QuadConfig, QuadratureResult};

/// `c0 + c1 x + c2 x²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Quadratic {
    pub const fn new(c0: f64, c1: f64, c2: f64) -> Self {
        Self { c0, c1, c2 }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.c0 + x * (self.c1 + x * self.c2)
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        self.c1 + 2.0 * self.c2 * x
    }

    /// Strictly decreasing on `(0, ∞)`.
    pub fn decreasing_on_half_line(&self) -> bool {
        self.c1 <= 0.0 && self.c2 <= 0.0 && (self.c1 != 0.0 || self.c2 != 0.0)
    }

    /// The positive zero at which the polynomial changes sign from `+` to
    /// `−`, if there is exactly one such zero on `(0, ∞)`.
    pub fn sign_change_root(&self) -> Option<f64> {
        let roots = self.real_roots();
        let mut found = None;
        for r in roots.into_iter().flatten() {
            if r > 0.0 && self.derivative(r) < 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some(r);
            }
        }
        found
    }

    fn real_roots(&self) -> [Option<f64>; 2] {
        let Quadratic { c0, c1, c2 } = *self;
        if c2 == 0.0 {
            if c1 == 0.0 {
                return [None, None];
            }
            return [Some(-c0 / c1), None];
        }
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc < 0.0 {
            return [None, None];
        }
        // Cancellation-free pair: q/c2 and c0/q.
        let q = -0.5 * (c1 + disc.sqrt().copysign(c1));
        if q == 0.0 {
            return [Some(0.0), None];
        }
        [Some(q / c2), Some(c0 / q)]
    }
}

pub type LogDensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A density `g` on `(0, ∞)` with quadratic `s`, `τ` such that
/// `(s g)' = τ g`.
#[derive(Clone)]
pub struct SteinPair {
    pub label: String,
    pub s: Quadratic,
    pub tau: Quadratic,
    log_density: LogDensityFn,
    /// `ln Z` where `g = kernel / Z`.
    pub log_normalizer: f64,
    /// Positive zero of `τ`, stored whenever it exists.
    pub alpha: Option<f64>,
    /// `τ` strictly decreasing on `(0, ∞)`; gates the bound machinery.
    pub monotone_tau: bool,
    /// Human-readable parameter condition equivalent to `monotone_tau`.
    pub hypothesis: String,
}

impl fmt::Debug for SteinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SteinPair")
            .field("label", &self.label)
            .field("s", &self.s)
            .field("tau", &self.tau)
            .field("log_normalizer", &self.log_normalizer)
            .field("alpha", &self.alpha)
            .field("monotone_tau", &self.monotone_tau)
            .finish()
    }
}

impl SteinPair {
    /// `log_density` must be the normalized log-density.
    pub fn new(
        label: impl Into<String>,
        s: Quadratic,
        tau: Quadratic,
        log_density: LogDensityFn,
        log_normalizer: f64,
        hypothesis: impl Into<String>,
    ) -> Self {
        let mut pair = Self {
            label: label.into(),
            s,
            tau,
            log_density,
            log_normalizer,
            alpha: None,
            monotone_tau: false,
            hypothesis: hypothesis.into(),
        };
        pair.refresh_tau();
        pair
    }

    fn refresh_tau(&mut self) {
        self.monotone_tau = self.tau.decreasing_on_half_line() && self.tau.c0 > 0.0;
        self.alpha = self.tau.sign_change_root().map(|r| polish_root(&self.tau, r));
    }

    /// Same density and `s`, different `τ`. Used to check that the
    /// structural identity detects a wrong `τ`.
    pub fn with_tau(&self, tau: Quadratic) -> Self {
        let mut pair = self.clone();
        pair.tau = tau;
        pair.label = format!("{} [modified tau]", self.label);
        pair.refresh_tau();
        pair
    }

    #[inline]
    pub fn log_density(&self, x: f64) -> f64 {
        (self.log_density)(x)
    }

    #[inline]
    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    /// `ln(s(x) g(x))`.
    #[inline]
    pub fn log_sg(&self, x: f64) -> f64 {
        self.s.eval(x).ln() + self.log_density(x)
    }

    /// Characteristic length: `alpha` (the mode of `s·g`) when it exists.
    pub fn scale(&self) -> f64 {
        match self.alpha {
            Some(a) if a.is_finite() && a > 0.0 => a,
            _ => 1.0,
        }
    }

    /// `∫_lo^hi g(t) φ(t) dt`; `hi` may be infinite. Integrals over
    /// `(0, ∞)` are split at [`scale`](Self::scale).
    pub fn integrate_weighted<F>(&self, phi: F, lo: f64, hi: f64, cfg: &QuadConfig) -> QuadratureResult
    where
        F: Fn(f64) -> f64,
    {
        let integrand = |t: f64| {
            let y = phi(t);
            if y == 0.0 {
                0.0
            } else {
                y * self.density(t)
            }
        };
        let split = self.scale();
        let cfg = cfg.tail_scale(split);
        if lo < split && split < hi {
            let left = integrate_with(integrand, lo, split, &cfg);
            let right = integrate_with(integrand, split, hi, &cfg);
            QuadratureResult {
                value: left.value + right.value,
                abs_error_estimate: left.abs_error_estimate + right.abs_error_estimate,
                subdivisions: left.subdivisions + right.subdivisions,
                converged: left.converged && right.converged,
            }
        } else {
            integrate_with(integrand, lo, hi, &cfg)
        }
    }

    /// `P(lo < W < hi)`.
    pub fn mass(&self, lo: f64, hi: f64) -> QuadratureResult {
        self.integrate_weighted(|_| 1.0, lo, hi, &QuadConfig::with_tolerances(1e-14, 1e-13))
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.mass(0.0, x).value
    }
}

/// One Newton step on a quadratic root from the closed form.
fn polish_root(tau: &Quadratic, r: f64) -> f64 {
    let d = tau.derivative(r);
    if d == 0.0 {
        return r;
    }
    let next = r - tau.eval(r) / d;
    if next > 0.0 && tau.eval(next).abs() <= tau.eval(r).abs() {
        next
    } else {
        r
    }
}

/// The unique positive zero `α` of a decreasing `τ`.
pub fn tau_zero(pair: &SteinPair) -> Result<f64> {
    if !pair.monotone_tau {
        return Err(Error::Precondition(format!(
            "tau is not decreasing on (0, inf) for {}; the bound requires {}",
            pair.label, pair.hypothesis
        )));
    }
    pair.alpha
        .ok_or_else(|| Error::Precondition(format!("tau has no positive zero for {}", pair.label)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots() {
        // 1 − x²
        let q = Quadratic::new(1.0, 0.0, -1.0);
        assert_eq!(q.sign_change_root(), Some(1.0));
        assert!(q.decreasing_on_half_line());
        // 2 − x, linear
        assert_eq!(Quadratic::new(2.0, -1.0, 0.0).sign_change_root(), Some(2.0));
        // x² + 1 has no real root
        assert_eq!(Quadratic::new(1.0, 0.0, 1.0).sign_change_root(), None);
        // −(x − 1)(x − 3) changes sign − → + at 1, + → − at 3
        let q = Quadratic::new(-3.0, 4.0, -1.0);
        assert!((q.sign_change_root().unwrap() - 3.0).abs() < 1e-15);
        assert!(!q.decreasing_on_half_line());
    }

    #[test]
    fn tau_zero_refuses_non_monotone() {
        let pair = SteinPair::new(
            "test",
            Quadratic::new(0.0, 0.0, 1.0),
            Quadratic::new(0.5, 1.0, -0.5),
            Arc::new(|x: f64| -x),
            0.0,
            "p <= -1",
        );
        assert!(pair.alpha.is_some());
        assert!(matches!(tau_zero(&pair), Err(Error::Precondition(_))));
    }
}
