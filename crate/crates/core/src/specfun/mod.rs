//! Real-valued special functions for the GIG and Kummer normalizing
//! constants.
//!
//! Results that can overflow or underflow `f64` are returned as a
//! [`SpecfunResult`], a mantissa together with a natural-log scale.

mod bessel;
mod gamma;
mod tricomi;

use serde::{Deserialize, Serialize};

pub use bessel::{bessel_k, bessel_k_with, BESSEL_SERIES_SWITCH};
pub use gamma::log_gamma;
pub use tricomi::{tricomi_u, tricomi_u_with};

/// `value · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecfunResult {
    pub value: f64,
    pub log_scale: f64,
    pub converged: bool,
    pub terms_used: usize,
}

impl SpecfunResult {
    /// The represented number as a plain `f64` (may overflow to `inf` or
    /// underflow to zero).
    pub fn to_f64(&self) -> f64 {
        self.value * self.log_scale.exp()
    }

    /// Natural log of the represented number. Only meaningful for positive
    /// values.
    pub fn ln(&self) -> f64 {
        self.value.ln() + self.log_scale
    }
}

/// Iteration budget and convergence tolerance shared by the series and
/// continued-fraction kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecfunConfig {
    pub max_terms: usize,
    pub tol: f64,
}

impl Default for SpecfunConfig {
    fn default() -> Self {
        Self {
            max_terms: 10_000,
            tol: f64::EPSILON,
        }
    }
}
