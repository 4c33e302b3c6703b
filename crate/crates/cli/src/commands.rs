use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use stein_core::distributions::{FamilyParams, KummerNormalizerReport, Quadratic};
use stein_core::stein::{
    bound_m, check_lemma_inequalities, check_solution_bound, check_structural_identity, default_family,
    solve_stein_equation, stein_discrepancy, TestFunction, DEFAULT_FAMILY_ID, SIGMA_GATE,
};

use crate::args::{Common, Format};
use crate::failure::{Failure, EXIT_NON_CONVERGENCE, EXIT_OK, EXIT_VERIFICATION};
use crate::output::{emit, emit_sidecar, num, pretty, summary, Csv, Meta};

/// Relative tolerance of the structural identity check.
const STRUCTURAL_TOL: f64 = 1e-6;

pub fn density(common: &Common) -> Result<i32, Failure> {
    let params = common.params()?;
    let spec = common.grid_spec()?;
    let pair = params.stein_pair()?;
    let grid = spec.points();
    let log_d: Vec<f64> = grid.iter().map(|&x| pair.log_density(x)).collect();
    let text = match common.tabular_format() {
        Format::Csv => {
            let mut csv = Csv::new(&["x", "log_density", "density"]);
            for (&x, &l) in grid.iter().zip(&log_d) {
                csv.row(&[num(x), num(l), num(l.exp())]);
            }
            csv.into_string()
        }
        Format::Json => {
            let meta = Meta::new("density", params, &spec, common.seed);
            let normalizer = match params {
                FamilyParams::Kummer(k) => serde_json::to_value(KummerNormalizerReport::compute(&k)?).unwrap(),
                FamilyParams::Gig(_) => Value::Null,
            };
            let density: Vec<f64> = log_d.iter().map(|l| l.exp()).collect();
            pretty(&summary(
                &meta,
                json!({
                    "log_normalizer": pair.log_normalizer,
                    "normalizer_diagnostics": normalizer,
                    "x": grid,
                    "log_density": log_d,
                    "density": density,
                }),
            ))
        }
    };
    emit(common.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

pub fn solve(common: &Common) -> Result<i32, Failure> {
    let params = common.params()?;
    let spec = common.grid_spec()?;
    let pair = params.stein_pair()?;
    let h = TestFunction::builtin(&common.h, &pair)?;
    let grid = spec.points();
    let sol = solve_stein_equation(&pair, &h, &grid)?;
    let norm = h.centered_sup_norm(&grid, sol.e_h);
    let bound = match bound_m(&pair) {
        Ok(b) => serde_json::to_value(check_solution_bound(&sol, &b, norm)).unwrap(),
        Err(e) => json!({ "not_applicable": e.to_string() }),
    };
    let meta = Meta::new("solve", params, &spec, common.seed);
    let stats = json!({
        "h": sol.h,
        "e_h": sol.e_h,
        "constant_c": sol.constant_c,
        "max_residual": sol.max_residual,
        "forms_agreement": sol.forms_agreement,
        "masked_count": sol.masked_count,
        "split_point": sol.split_point,
        "converged": sol.converged,
        "centered_sup_norm_grid_estimate": norm,
        "bound": bound,
    });
    match common.tabular_format() {
        Format::Csv => {
            let mut csv = Csv::new(&["x", "f", "f_prime", "residual", "masked"]);
            for i in 0..grid.len() {
                csv.row(&[
                    num(sol.grid[i]),
                    num(sol.f_values[i]),
                    num(sol.f_prime_values[i]),
                    num(sol.residuals[i]),
                    u8::from(sol.masked[i]).to_string(),
                ]);
            }
            emit(common.out.as_deref(), &csv.into_string())?;
            emit_sidecar(common.out.as_deref(), &pretty(&summary(&meta, stats)))?;
        }
        Format::Json => {
            let mut body = stats;
            body["x"] = json!(sol.grid);
            body["f"] = json!(sol.f_values);
            body["f_prime"] = json!(sol.f_prime_values);
            body["residual"] = json!(sol.residuals);
            body["masked"] = json!(sol.masked);
            emit(common.out.as_deref(), &pretty(&summary(&meta, body)))?;
        }
    }
    Ok(if sol.converged { EXIT_OK } else { EXIT_NON_CONVERGENCE })
}

pub fn bound(common: &Common) -> Result<i32, Failure> {
    common.require_json("bound")?;
    let params = common.params()?;
    let spec = common.grid_spec()?;
    let pair = params.stein_pair()?;
    let report = bound_m(&pair)?;
    let meta = Meta::new("bound", params, &spec, common.seed);
    let body = serde_json::to_value(&report).unwrap();
    emit(common.out.as_deref(), &pretty(&summary(&meta, body)))?;
    Ok(EXIT_OK)
}

pub fn verify(common: &Common, corrupt_tau: bool) -> Result<i32, Failure> {
    common.require_json("verify")?;
    let params = common.params()?;
    let spec = common.grid_spec()?;
    let mut pair = params.stein_pair()?;
    if corrupt_tau {
        let t = pair.tau;
        pair = pair.with_tau(Quadratic::new(t.c0 + 0.1, t.c1, t.c2));
    }
    let grid = spec.points();
    let structural = check_structural_identity(&pair, &grid, STRUCTURAL_TOL);
    let (lemma, lemma_ok) = if pair.monotone_tau {
        let r = check_lemma_inequalities(&pair, &grid)?;
        let ok = r.passed;
        (serde_json::to_value(r).unwrap(), ok)
    } else {
        (
            json!({ "not_applicable": format!("tau is not decreasing; requires {}", pair.hypothesis) }),
            true,
        )
    };
    let passed = structural.passed && lemma_ok;
    let meta = Meta::new("verify", params, &spec, common.seed);
    let body = json!({
        "corrupted_tau": corrupt_tau,
        "structural_identity": structural,
        "lemma_inequalities": lemma,
        "passed": passed,
    });
    emit(common.out.as_deref(), &pretty(&summary(&meta, body)))?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFICATION })
}

/// One value per line; a non-numeric first line is taken as a header.
fn read_sample(path: &Path) -> Result<Vec<f64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let cell = line.split(',').next().unwrap_or("").trim();
        if cell.is_empty() {
            continue;
        }
        match cell.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => values.push(v),
            Ok(v) => {
                return Err(Failure::usage(format!(
                    "{}:{}: sample value {v} is outside (0, inf)",
                    path.display(),
                    i + 1
                )))
            }
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(Failure::usage(format!(
                    "{}:{}: not a number: {cell:?}",
                    path.display(),
                    i + 1
                )));
            }
        }
    }
    if values.is_empty() {
        return Err(Failure::usage(format!("{}: no sample values", path.display())));
    }
    Ok(values)
}

pub fn gof(common: &Common, sample: &Path) -> Result<i32, Failure> {
    common.require_json("gof")?;
    let params = common.params()?;
    let spec = common.grid_spec()?;
    let values = read_sample(sample)?;
    let pair = params.stein_pair()?;
    let report = stein_discrepancy(&values, &pair, &default_family(), DEFAULT_FAMILY_ID)?;
    let consistent = report.statistic < SIGMA_GATE;
    let meta = Meta::new("gof", params, &spec, common.seed);
    let body = json!({
        "sample": sample.display().to_string(),
        "discrepancy": report,
        "gate": SIGMA_GATE,
        "verdict": if consistent { "consistent" } else { "reject" },
    });
    emit(common.out.as_deref(), &pretty(&summary(&meta, body)))?;
    Ok(EXIT_OK)
}

pub fn sample(common: &Common, n: usize) -> Result<i32, Failure> {
    let params = common.params()?;
    let spec = common.grid_spec()?;
    let batch = params.sample(n, common.seed)?;
    let meta = Meta::new("sample", params, &spec, common.seed);
    let info = json!({
        "n": batch.values.len(),
        "method": batch.method,
        "acceptance_rate": batch.acceptance_rate,
    });
    match common.tabular_format() {
        Format::Csv => {
            let mut csv = Csv::new(&["x"]);
            for &v in &batch.values {
                csv.row(&[num(v)]);
            }
            emit(common.out.as_deref(), &csv.into_string())?;
            emit_sidecar(common.out.as_deref(), &pretty(&summary(&meta, info)))?;
        }
        Format::Json => {
            let mut body = info;
            body["values"] = json!(batch.values);
            emit(common.out.as_deref(), &pretty(&summary(&meta, body)))?;
        }
    }
    Ok(EXIT_OK)
}
