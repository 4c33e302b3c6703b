use serde::Serialize;
use stein_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;

/// An error on its way to stderr, with the process exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub code: i32,
}

#[derive(Serialize)]
struct ErrorJson<'a> {
    error: &'a str,
    message: &'a str,
    exit_code: i32,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            kind: "usage",
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            kind: "io",
            message: message.into(),
            code: EXIT_USAGE,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorJson {
            error: self.kind,
            message: &self.message,
            exit_code: self.code,
        })
        .expect("error JSON")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (kind, code) = match &e {
            Error::Domain { .. } => ("domain", EXIT_USAGE),
            Error::InvalidParameter { .. } => ("invalid-parameter", EXIT_USAGE),
            Error::InvalidGrid(_) => ("invalid-grid", EXIT_USAGE),
            Error::InsufficientData(_) => ("insufficient-data", EXIT_USAGE),
            Error::NonFinite { .. } => ("non-finite", EXIT_USAGE),
            Error::Precondition(_) => ("hypothesis", EXIT_USAGE),
            Error::NonConvergence { .. } => ("non-convergence", EXIT_NON_CONVERGENCE),
            Error::NoBracket { .. } => ("no-bracket", EXIT_NON_CONVERGENCE),
        };
        Self {
            kind,
            message: e.to_string(),
            code,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_errors_map_to_exit_codes() {
        let hyp: Failure = Error::Precondition("requires p ≤ −1".into()).into();
        assert_eq!((hyp.kind, hyp.code), ("hypothesis", EXIT_USAGE));
        let nc: Failure = Error::NonConvergence {
            what: "x".into(),
            estimate: 1.0,
            error: 1.0,
        }
        .into();
        assert_eq!(nc.code, EXIT_NON_CONVERGENCE);
    }

    #[test]
    fn json_shape() {
        let v: serde_json::Value = serde_json::from_str(&Failure::usage("bad \"flag\"").to_json()).unwrap();
        assert_eq!(v["error"], "usage");
        assert_eq!(v["message"], "bad \"flag\"");
        assert_eq!(v["exit_code"], 2);
    }
}
