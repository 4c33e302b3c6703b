//! Stein characterizations, Stein-equation solutions and uniform solution
//! bounds for densities on `(0, ∞)` whose density `g` satisfies
//! `(s g)' = τ g` for quadratic polynomials `s` and `τ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfun`]: log-scaled modified Bessel `K_p`, Tricomi `U` and `ln Γ`.
//! * [`numerics`]: adaptive Gauss–Kronrod quadrature on `(0, ∞)`, finite
//!   differences, Brent root finding and reproducible random streams.
//! * [`distributions`]: GIG and Kummer parameter records, log-densities,
//!   their [`SteinPair`](distributions::SteinPair)s and samplers.
//! * [`stein`]: the operator, the Stein-equation solver, the bound `M`,
//!   the tail inequalities and the Monte Carlo discrepancy statistic.

// `!(x > 0.0)` is deliberate: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference values are kept exactly as printed by the oracle.
#![allow(clippy::excessive_precision)]

pub mod distributions;
pub mod error;
pub mod numerics;
pub mod specfun;
pub mod stein;

pub use error::{Error, Result};
