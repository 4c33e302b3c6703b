//! Shared numerical kernels.

pub mod diff;
pub mod quadrature;
pub mod rng;
pub mod root;

pub use diff::{differentiate, differentiate_richardson};
pub use quadrature::{integrate, integrate_with, kronrod21, QuadConfig, QuadratureResult};
pub use rng::{rng_stream, RngStream};
pub use root::find_root;
