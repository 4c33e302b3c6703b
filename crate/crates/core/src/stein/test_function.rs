use std::fmt;
use std::sync::Arc;

use crate::distributions::SteinPair;
use crate::error::{Error, Result};

use super::grid::refine;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A bounded right-hand side `h` for the Stein equation.
#[derive(Clone)]
pub struct TestFunction {
    name: String,
    h: RealFn,
    constant: Option<f64>,
    pub smoothness_tag: String,
    /// `max |h − E h(W)|` over a refined grid, once computed.
    pub sup_norm_of_centered: Option<f64>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("smoothness_tag", &self.smoothness_tag)
            .field("sup_norm_of_centered", &self.sup_norm_of_centered)
            .finish()
    }
}

/// Names accepted by [`TestFunction::builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["const", "exp-decay", "logistic-step", "osc"];

impl TestFunction {
    pub fn new(name: impl Into<String>, smoothness_tag: impl Into<String>, h: RealFn) -> Self {
        Self {
            name: name.into(),
            h,
            constant: None,
            smoothness_tag: smoothness_tag.into(),
            sup_norm_of_centered: None,
        }
    }

    pub fn constant(c: f64) -> Self {
        let mut t = Self::new(format!("const:{c}"), "constant", Arc::new(move |_| c));
        t.constant = Some(c);
        t
    }

    /// `e^{−x}`.
    pub fn exp_decay() -> Self {
        Self::new("exp-decay", "analytic", Arc::new(|x: f64| (-x).exp()))
    }

    /// Smoothed indicator of `x < center`, transition width `center/10`.
    pub fn logistic_step(center: f64) -> Self {
        let width = center / 10.0;
        Self::new(
            format!("logistic-step:{center}"),
            "analytic",
            Arc::new(move |x: f64| 1.0 / (1.0 + ((x - center) / width).exp())),
        )
    }

    /// `sin(x)/(1 + x²) + 2`.
    pub fn osc() -> Self {
        Self::new("osc", "analytic", Arc::new(|x: f64| x.sin() / (1.0 + x * x) + 2.0))
    }

    /// Parses `const[:c]`, `exp-decay`, `logistic-step[:center]` or `osc`.
    /// The step is centred at the pair's `α` unless given.
    pub fn builtin(spec: &str, pair: &SteinPair) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let number = |default: f64| -> Result<f64> {
            match arg {
                None => Ok(default),
                Some(a) => a
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::domain("test function", format!("bad argument {a:?} in {spec:?}"))),
            }
        };
        let no_arg = || -> Result<()> {
            match arg {
                None => Ok(()),
                Some(_) => Err(Error::domain("test function", format!("{name} takes no argument"))),
            }
        };
        match name {
            "const" => Ok(Self::constant(number(1.0)?)),
            "exp-decay" => no_arg().map(|_| Self::exp_decay()),
            "logistic-step" => {
                let center = number(pair.scale())?;
                if center <= 0.0 {
                    return Err(Error::domain("test function", "logistic-step centre must be positive"));
                }
                Ok(Self::logistic_step(center))
            }
            "osc" => no_arg().map(|_| Self::osc()),
            _ => Err(Error::domain(
                "test function",
                format!("unknown test function {spec:?}; expected one of {BUILTIN_NAMES:?}"),
            )),
        }
    }

    /// The four built-ins with default arguments.
    pub fn builtins(pair: &SteinPair) -> Vec<Self> {
        vec![
            Self::constant(1.0),
            Self::exp_decay(),
            Self::logistic_step(pair.scale()),
            Self::osc(),
        ]
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    /// `Some(c)` for a function known to be identically `c`.
    pub fn constant_value(&self) -> Option<f64> {
        self.constant
    }

    /// Fails if `h` is not finite somewhere on the grid.
    pub fn check_bounded(&self, grid: &[f64]) -> Result<()> {
        for &x in grid {
            let v = self.eval(x);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    function: self.name.clone(),
                    values: vec![x],
                });
            }
        }
        Ok(())
    }

    /// `max |h − e_h|` over `grid` refined tenfold. A grid supremum, so a
    /// lower estimate of the true sup norm.
    pub fn centered_sup_norm(&self, grid: &[f64], e_h: f64) -> f64 {
        if self.constant.is_some() {
            return 0.0;
        }
        refine(grid, 10)
            .into_iter()
            .map(|x| (self.eval(x) - e_h).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{gig_stein_pair, GigParams};

    #[test]
    fn builtin_parsing() {
        let pair = gig_stein_pair(&GigParams::new(-1.0, 2.0, 2.0).unwrap()).unwrap();
        assert_eq!(
            TestFunction::builtin("const:7", &pair).unwrap().constant_value(),
            Some(7.0)
        );
        let step = TestFunction::builtin("logistic-step", &pair).unwrap();
        assert_eq!(step.name(), "logistic-step:1");
        assert_eq!(step.eval(1.0), 0.5);
        assert!(TestFunction::builtin("logistic-step:2.5", &pair).unwrap().eval(0.1) > 0.99);
        assert!(TestFunction::builtin("osc:3", &pair).is_err());
        assert!(TestFunction::builtin("cubic", &pair).is_err());
        assert!(TestFunction::builtin("const:x", &pair).is_err());
    }

    #[test]
    fn sup_norm_on_refined_grid() {
        let h = TestFunction::exp_decay();
        let n = h.centered_sup_norm(&[1.0, 2.0], 0.0);
        assert_eq!(n, (-1.0f64).exp());
        assert_eq!(TestFunction::constant(3.0).centered_sup_norm(&[1.0, 2.0], 3.0), 0.0);
    }

    #[test]
    fn unbounded_detected() {
        let h = TestFunction::new("recip", "singular", Arc::new(|x: f64| 1.0 / (x - 1.0)));
        assert!(h.check_bounded(&[0.5, 1.0, 2.0]).is_err());
    }
}
