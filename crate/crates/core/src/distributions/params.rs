use serde::{Deserialize, Serialize};

use super::pair::SteinPair;
use super::sample::SampleBatch;
use crate::error::{Error, Result};

/// Parameters `(p, a, b)` of the generalized inverse Gaussian density
/// `∝ x^{p−1} e^{−(a x + b/x)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGig")]
pub struct GigParams {
    p: f64,
    a: f64,
    b: f64,
}

#[derive(Deserialize)]
struct RawGig {
    p: f64,
    a: f64,
    b: f64,
}

impl TryFrom<RawGig> for GigParams {
    type Error = Error;

    fn try_from(raw: RawGig) -> Result<Self> {
        GigParams::new(raw.p, raw.a, raw.b)
    }
}

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    require_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive",
        })
    }
}

impl GigParams {
    pub fn new(p: f64, a: f64, b: f64) -> Result<Self> {
        require_finite("p", p)?;
        require_positive("a", a)?;
        require_positive("b", b)?;
        Ok(Self { p, a, b })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `τ` is decreasing on `(0, ∞)` exactly when `p ≤ −1`.
    pub fn monotone_tau(&self) -> bool {
        self.p <= -1.0
    }
}

/// Parameters `(a, b, c)` of the Kummer density
/// `∝ x^{a−1} (1 + x)^{−a−b} e^{−c x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawKummer")]
pub struct KummerParams {
    a: f64,
    b: f64,
    c: f64,
}

#[derive(Deserialize)]
struct RawKummer {
    a: f64,
    b: f64,
    c: f64,
}

impl TryFrom<RawKummer> for KummerParams {
    type Error = Error;

    fn try_from(raw: RawKummer) -> Result<Self> {
        KummerParams::new(raw.a, raw.b, raw.c)
    }
}

impl KummerParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        require_positive("a", a)?;
        require_finite("b", b)?;
        require_positive("c", c)?;
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// `τ` is decreasing on `(0, ∞)` exactly when `1 − b − c ≤ 0`.
    pub fn monotone_tau(&self) -> bool {
        1.0 - self.b - self.c <= 0.0
    }
}

/// Either family, in the JSON shape
/// `{"family": "gig", "p": …, "a": …, "b": …}` or
/// `{"family": "kummer", "a": …, "b": …, "c": …}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyParams {
    Gig(GigParams),
    Kummer(KummerParams),
}

impl FamilyParams {
    pub fn family(&self) -> &'static str {
        match self {
            FamilyParams::Gig(_) => "gig",
            FamilyParams::Kummer(_) => "kummer",
        }
    }

    pub fn stein_pair(&self) -> Result<SteinPair> {
        match self {
            FamilyParams::Gig(p) => super::gig_stein_pair(p),
            FamilyParams::Kummer(p) => super::kummer_stein_pair(p),
        }
    }

    pub fn monotone_tau(&self) -> bool {
        match self {
            FamilyParams::Gig(p) => p.monotone_tau(),
            FamilyParams::Kummer(p) => p.monotone_tau(),
        }
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleBatch> {
        super::sample(self, n, seed)
    }
}

impl From<GigParams> for FamilyParams {
    fn from(p: GigParams) -> Self {
        FamilyParams::Gig(p)
    }
}

impl From<KummerParams> for FamilyParams {
    fn from(p: KummerParams) -> Self {
        FamilyParams::Kummer(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_validation() {
        assert!(GigParams::new(-1.0, 2.0, 2.0).is_ok());
        assert!(matches!(
            GigParams::new(0.0, 0.0, 1.0),
            Err(Error::InvalidParameter { name: "a", .. })
        ));
        assert!(matches!(
            GigParams::new(0.0, 1.0, -1.0),
            Err(Error::InvalidParameter { name: "b", .. })
        ));
        assert!(GigParams::new(f64::NAN, 1.0, 1.0).is_err());
        assert!(KummerParams::new(1.0, -30.0, 1.0).is_ok());
        assert!(matches!(
            KummerParams::new(-1.0, 0.0, 1.0),
            Err(Error::InvalidParameter { name: "a", .. })
        ));
        assert!(matches!(
            KummerParams::new(1.0, 0.0, 0.0),
            Err(Error::InvalidParameter { name: "c", .. })
        ));
    }

    #[test]
    fn monotone_flags() {
        assert!(GigParams::new(-1.0, 1.0, 1.0).unwrap().monotone_tau());
        assert!(!GigParams::new(-0.99, 1.0, 1.0).unwrap().monotone_tau());
        assert!(KummerParams::new(1.0, 0.0, 1.0).unwrap().monotone_tau());
        assert!(!KummerParams::new(1.0, -0.5, 1.0).unwrap().monotone_tau());
    }

    #[test]
    fn json_shape() {
        let gig: FamilyParams = GigParams::new(-1.0, 2.0, 2.0).unwrap().into();
        let text = serde_json::to_string(&gig).unwrap();
        assert_eq!(text, r#"{"family":"gig","p":-1.0,"a":2.0,"b":2.0}"#);
        let back: FamilyParams = serde_json::from_str(r#"{"family":"kummer","a":1,"b":0,"c":1}"#).unwrap();
        assert_eq!(back, FamilyParams::Kummer(KummerParams::new(1.0, 0.0, 1.0).unwrap()));
        let bad = serde_json::from_str::<FamilyParams>(r#"{"family":"gig","p":0,"a":-1,"b":1}"#);
        assert!(bad.is_err());
    }
}
