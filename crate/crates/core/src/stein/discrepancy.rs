use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{FamilyParams, SamplerMethod, SteinPair};
use crate::error::{Error, Result};
use crate::numerics::{integrate_with, kronrod21, QuadConfig};

use super::test_function::RealFn;

/// Studentized means above this value reject the target.
pub const SIGMA_GATE: f64 = 4.0;

pub const DEFAULT_FAMILY_ID: &str = "x^j exp(-x/lambda)/(1+x), j in {0,1}, lambda in {0.5,1,2,5}";

/// Largest number of offending sample values quoted in an error.
const MAX_REPORTED_VALUES: usize = 10;

/// A test function `f` with its derivative, to be fed to the operator
/// `s f' + τ f`.
#[derive(Clone)]
pub struct OperatorTestFunction {
    pub name: String,
    pub f: RealFn,
    pub f_prime: RealFn,
}

/// `x^j e^{−x/λ}/(1+x)` for `j ∈ {0, 1}`, `λ ∈ {0.5, 1, 2, 5}`. Each is
/// bounded, so `s g f` vanishes at both ends of `(0, ∞)` for either family.
pub fn default_family() -> Vec<OperatorTestFunction> {
    let mut out = Vec::with_capacity(8);
    for j in [0, 1] {
        for lambda in [0.5, 1.0, 2.0, 5.0] {
            let f: RealFn = Arc::new(move |x: f64| x.powi(j) * (-x / lambda).exp() / (1.0 + x));
            let f_prime: RealFn = Arc::new(move |x: f64| {
                let e = (-x / lambda).exp();
                let xj = x.powi(j);
                let lead = if j == 0 { 0.0 } else { 1.0 / (1.0 + x) };
                e * (lead - xj / (lambda * (1.0 + x)) - xj / ((1.0 + x) * (1.0 + x)))
            });
            out.push(OperatorTestFunction {
                name: format!("j={j},lambda={lambda}"),
                f,
                f_prime,
            });
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionEstimate {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub per_function_estimates: Vec<FunctionEstimate>,
    /// `max |estimate| / std_error`.
    pub statistic: f64,
    pub n: usize,
    pub family_id: String,
}

/// Sample means of `s(X) f'(X) + τ(X) f(X)` over `family`, studentized.
pub fn stein_discrepancy(
    values: &[f64],
    pair: &SteinPair,
    family: &[OperatorTestFunction],
    family_id: &str,
) -> Result<DiscrepancyReport> {
    let n = values.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 sample values, got {n}"
        )));
    }
    let estimates: Vec<Result<FunctionEstimate>> = family
        .par_iter()
        .map(|tf| {
            let ops: Vec<f64> = values
                .iter()
                .map(|&x| pair.s.eval(x) * (tf.f_prime)(x) + pair.tau.eval(x) * (tf.f)(x))
                .collect();
            let bad: Vec<f64> = values
                .iter()
                .zip(&ops)
                .filter(|(_, op)| !op.is_finite())
                .map(|(&x, _)| x)
                .take(MAX_REPORTED_VALUES)
                .collect();
            if !bad.is_empty() {
                return Err(Error::NonFinite {
                    function: tf.name.clone(),
                    values: bad,
                });
            }
            let mean = ops.iter().sum::<f64>() / n as f64;
            let var = ops.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            Ok(FunctionEstimate {
                name: tf.name.clone(),
                estimate: mean,
                std_error: (var / n as f64).sqrt(),
            })
        })
        .collect();
    let per_function_estimates = estimates.into_iter().collect::<Result<Vec<_>>>()?;
    let statistic = per_function_estimates
        .iter()
        .map(|e| {
            if e.estimate == 0.0 {
                0.0
            } else {
                e.estimate.abs() / e.std_error
            }
        })
        .fold(0.0, f64::max);
    Ok(DiscrepancyReport {
        per_function_estimates,
        statistic,
        n,
        family_id: family_id.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacterizationReport {
    pub sample_params: FamilyParams,
    pub target: String,
    pub n: usize,
    pub seed: u64,
    pub method: SamplerMethod,
    pub acceptance_rate: f64,
    pub report: DiscrepancyReport,
    pub gate: f64,
    pub passed: bool,
}

/// Draws `n` values from `params` and tests them against the pair of the
/// same distribution.
pub fn characterization_demo(params: &FamilyParams, n: usize, seed: u64) -> Result<CharacterizationReport> {
    characterization_against(params, &params.stein_pair()?, n, seed)
}

/// Draws `n` values from `sample_params` and tests them against `target`.
pub fn characterization_against(
    sample_params: &FamilyParams,
    target: &SteinPair,
    n: usize,
    seed: u64,
) -> Result<CharacterizationReport> {
    let batch = sample_params.sample(n, seed)?;
    let report = stein_discrepancy(&batch.values, target, &default_family(), DEFAULT_FAMILY_ID)?;
    Ok(CharacterizationReport {
        sample_params: *sample_params,
        target: target.label.clone(),
        n,
        seed,
        method: batch.method,
        acceptance_rate: batch.acceptance_rate,
        passed: report.statistic < SIGMA_GATE,
        gate: SIGMA_GATE,
        report,
    })
}

/// Kolmogorov–Smirnov distance between the empirical law of `values` and
/// the pair's distribution. The CDF is accumulated between consecutive
/// order statistics.
pub fn ks_distance(values: &[f64], pair: &SteinPair) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InsufficientData("no sample values".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    if !(sorted[0] > 0.0) || !sorted[sorted.len() - 1].is_finite() {
        return Err(Error::domain(
            "ks_distance",
            "sample values must be positive and finite",
        ));
    }
    let n = sorted.len() as f64;
    let cfg = QuadConfig::with_tolerances(1e-14, 1e-12);
    let mut cdf = integrate_with(|t| pair.density(t), 0.0, sorted[0], &cfg).value;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        if i > 0 && x > sorted[i - 1] {
            cdf += kronrod21(|t| pair.density(t), sorted[i - 1], x).0;
        }
        let above = (i + 1) as f64 / n - cdf;
        let below = cdf - i as f64 / n;
        worst = worst.max(above).max(below);
    }
    Ok(worst)
}
