//! GIG and Kummer distributions: parameter validation, log-densities,
//! Stein pairs and samplers.

mod gig;
mod kummer;
mod pair;
mod params;
mod sample;

pub use gig::{gig_alpha_closed_form, gig_log_density, gig_stein_pair};
pub use kummer::{kummer_alpha_closed_form, kummer_log_density, kummer_stein_pair, KummerNormalizerReport};
pub use pair::{tau_zero, LogDensityFn, Quadratic, SteinPair};
pub use params::{FamilyParams, GigParams, KummerParams};
pub use sample::{sample, sample_with_threads, SampleBatch, SamplerMethod, SAMPLE_CHUNK};
