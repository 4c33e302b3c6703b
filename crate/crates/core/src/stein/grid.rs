use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Lin,
}

/// `n` points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    /// 400 log-spaced points on `[1e-3, 50]`.
    pub const STANDARD: GridSpec = GridSpec {
        lo: 1e-3,
        hi: 50.0,
        n: 400,
        spacing: Spacing::Log,
    };

    pub fn new(lo: f64, hi: f64, n: usize, spacing: Spacing) -> Result<Self> {
        let spec = Self { lo, hi, n, spacing };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !(self.lo > 0.0) || !self.lo.is_finite() {
            return Err(Error::InvalidGrid(format!("lower end {} must be positive", self.lo)));
        }
        if !(self.hi > self.lo) || !self.hi.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "upper end {} must be finite and above {}",
                self.hi, self.lo
            )));
        }
        if self.n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {}", self.n)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        let mut xs: Vec<f64> = (0..self.n)
            .map(|i| {
                let t = i as f64 / last;
                match self.spacing {
                    Spacing::Log => self.lo * (self.hi / self.lo).powf(t),
                    Spacing::Lin => self.lo + (self.hi - self.lo) * t,
                }
            })
            .collect();
        xs[0] = self.lo;
        xs[self.n - 1] = self.hi;
        xs
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `lo:hi:n:log` or `lo:hi:n:lin`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGrid(format!("expected lo:hi:n:log|lin, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts[3].trim() {
            "log" => Spacing::Log,
            "lin" => Spacing::Lin,
            _ => return Err(bad()),
        };
        GridSpec::new(lo, hi, n, spacing)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Log => "log",
            Spacing::Lin => "lin",
        };
        write!(f, "{}:{}:{}:{}", self.lo, self.hi, self.n, sp)
    }
}

pub fn standard_grid() -> Vec<f64> {
    GridSpec::STANDARD.points()
}

/// Strictly increasing, positive and finite.
pub fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty grid".into()));
    }
    if let Some(&x) = grid.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidGrid(format!("point {x} is not positive and finite")));
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "not strictly increasing at {} -> {}",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// `factor − 1` extra points inside each grid interval.
pub fn refine(grid: &[f64], factor: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.len() * factor);
    for w in grid.windows(2) {
        for k in 0..factor {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / factor as f64);
        }
    }
    if let Some(&last) = grid.last() {
        out.push(last);
    }
    out
}
