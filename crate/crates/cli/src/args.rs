use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stein_core::distributions::{FamilyParams, GigParams, KummerParams};
use stein_core::stein::GridSpec;

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "stein",
    version,
    about = "Stein equations, solution bounds and goodness of fit for GIG and Kummer distributions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Log-density and density over a grid.
    Density(Common),
    /// Solve the Stein equation for a test function over a grid.
    Solve(Common),
    /// Solution bound M and the zero of tau.
    Bound(Common),
    /// Check (s g)' = tau g and the tail inequalities.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Add 0.1 to the constant term of tau before checking.
        #[arg(long, hide = true)]
        corrupt_tau: bool,
    },
    /// Stein discrepancy of a sample against the target.
    Gof {
        #[command(flatten)]
        common: Common,
        /// Single-column CSV of sample values (header optional).
        #[arg(long)]
        sample: PathBuf,
    },
    /// Draw a sample from the target.
    Sample {
        #[command(flatten)]
        common: Common,
        /// Number of draws.
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Gig,
    Kummer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// lo:hi:n:log|lin
    #[arg(long, default_value = "0.001:50:400:log")]
    pub grid: String,
    /// Test function: const[:c], exp-decay, logistic-step[:center], osc.
    #[arg(long, default_value = "exp-decay")]
    pub h: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Defaults to csv for tabular output and json otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Common {
    pub fn params(&self) -> Result<FamilyParams, Failure> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Failure::usage(format!("--{name} is required for --family {}", self.family_name())))
        };
        let refuse = |name: &str, v: Option<f64>| match v {
            Some(_) => Err(Failure::usage(format!(
                "--{name} does not apply to --family {}",
                self.family_name()
            ))),
            None => Ok(()),
        };
        match self.family {
            Family::Gig => {
                refuse("c", self.c)?;
                let p = GigParams::new(need("p", self.p)?, need("a", self.a)?, need("b", self.b)?)?;
                Ok(p.into())
            }
            Family::Kummer => {
                refuse("p", self.p)?;
                let p = KummerParams::new(need("a", self.a)?, need("b", self.b)?, need("c", self.c)?)?;
                Ok(p.into())
            }
        }
    }

    pub fn grid_spec(&self) -> Result<GridSpec, Failure> {
        Ok(self.grid.parse::<GridSpec>()?)
    }

    pub fn tabular_format(&self) -> Format {
        self.format.unwrap_or(Format::Csv)
    }

    /// Rejects `--format csv` for commands that only write JSON.
    pub fn require_json(&self, command: &str) -> Result<(), Failure> {
        match self.format {
            Some(Format::Csv) => Err(Failure::usage(format!("{command} writes JSON only"))),
            _ => Ok(()),
        }
    }

    fn family_name(&self) -> &'static str {
        match self.family {
            Family::Gig => "gig",
            Family::Kummer => "kummer",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(argv: &[&str]) -> Common {
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Density(c) => c,
            _ => unreachable!(),
        }
    }

    #[test]
    fn negative_parameters_parse() {
        let c = common(&[
            "stein", "density", "--family", "gig", "--p", "-1.5", "--a", "2", "--b", "2",
        ]);
        assert_eq!(
            c.params().unwrap(),
            FamilyParams::from(GigParams::new(-1.5, 2.0, 2.0).unwrap())
        );
        assert_eq!(c.grid_spec().unwrap(), GridSpec::STANDARD);
        assert_eq!(c.tabular_format(), Format::Csv);
    }

    #[test]
    fn missing_and_foreign_flags() {
        let c = common(&["stein", "density", "--family", "kummer", "--a", "1", "--b", "1"]);
        assert!(c.params().unwrap_err().message.contains("--c"));
        let c = common(&[
            "stein", "density", "--family", "kummer", "--a", "1", "--b", "1", "--c", "1", "--p", "2",
        ]);
        assert!(c.params().unwrap_err().message.contains("does not apply"));
    }
}
