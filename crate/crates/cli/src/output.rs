use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use stein_core::distributions::FamilyParams;
use stein_core::stein::GridSpec;

use crate::failure::Failure;

/// 17 significant digits, so values round-trip exactly.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma-separated rows under a header.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut text = header.join(",");
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Fields shared by every JSON summary.
#[derive(Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub params: FamilyParams,
    pub grid: String,
    pub seed: u64,
}

impl Meta {
    pub fn new(command: &'static str, params: FamilyParams, grid: &GridSpec, seed: u64) -> Self {
        Self {
            tool: "stein",
            version: env!("CARGO_PKG_VERSION"),
            command,
            params,
            grid: grid.to_string(),
            seed,
        }
    }
}

/// `{"meta": …}` merged with the fields of `body`.
pub fn summary(meta: &Meta, body: Value) -> Value {
    let mut out = json!({ "meta": meta });
    if let (Some(map), Value::Object(extra)) = (out.as_object_mut(), body) {
        map.extend(extra);
    }
    out
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value");
    s.push('\n');
    s
}

/// Writes to `path`, or to standard output when `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Writes the sidecar `<out>.json`, or to standard error when there is no
/// output file.
pub fn emit_sidecar(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".json");
            emit(Some(&PathBuf::from(name)), text)
        }
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_with_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.5), "-2.5000000000000000e0");
        for v in [std::f64::consts::PI, 1e-300, 6.02e23] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_rows() {
        let mut csv = Csv::new(&["x", "y"]);
        csv.row(&["1".into(), "2".into()]);
        assert_eq!(csv.into_string(), "x,y\n1,2\n");
    }
}
