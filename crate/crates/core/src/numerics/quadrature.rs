//! Globally adaptive Gauss–Kronrod (10/21 point) quadrature.
//!
//! Finite intervals are bisected where the local error estimate is largest
//! until the summed estimate meets `max(abs_tol, rel_tol·|I|)`. An infinite
//! upper limit is mapped onto `[0, 1)` with the rational substitution
//! `t = lo + scale·u/(1 − u)`; the Jacobian `scale/(1 − u)²` is polynomial in
//! `1/(1 − u)` and the Kronrod nodes never touch `u = 1`.
//!
//! Integrable endpoint singularities (`x^{a−1}` with `0 < a < 1`, or the
//! essential zero `e^{−b/(2x)}`) need no special casing: the bisection keeps
//! refining the first interval until its width falls below
//! [`MIN_RELATIVE_WIDTH`] times the magnitude of its endpoints, after which
//! the interval is frozen and only its error estimate is carried.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

/// Intervals narrower than this fraction of `max(|a|, |b|, f64::MIN_POSITIVE)`
/// are never bisected.
pub const MIN_RELATIVE_WIDTH: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Length scale of the rational map used for an infinite upper limit.
    pub tail_scale: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_subdivisions: 2000,
            tail_scale: 1.0,
        }
    }
}

impl QuadConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn tail_scale(mut self, scale: f64) -> Self {
        self.tail_scale = scale;
        self
    }
}

/// `∫_lo^hi f` to absolute tolerance `tol`. `hi` may be `f64::INFINITY`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, tol: f64) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    integrate_with(f, lo, hi, &QuadConfig::with_tolerances(tol, 0.0))
}

pub fn integrate_with<F>(f: F, lo: f64, hi: f64, cfg: &QuadConfig) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    assert!(!lo.is_nan() && !hi.is_nan(), "NaN integration limit");
    assert!(lo.is_finite(), "lower limit must be finite");
    if lo == hi {
        return QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 0,
            converged: true,
        };
    }
    if hi == f64::INFINITY {
        let scale = cfg.tail_scale;
        assert!(scale > 0.0 && scale.is_finite(), "tail scale must be positive");
        let mapped = |u: f64| {
            let w = 1.0 - u;
            let t = lo + scale * u / w;
            let y = f(t);
            if y == 0.0 {
                0.0
            } else {
                y * scale / (w * w)
            }
        };
        return adaptive(&mapped, 0.0, 1.0, cfg);
    }
    if hi < lo {
        let mut r = adaptive(&f, hi, lo, cfg);
        r.value = -r.value;
        return r;
    }
    adaptive(&f, lo, hi, cfg)
}

/// One non-adaptive 21-point Kronrod evaluation; used for short panels
/// where the integrand is known to be smooth.
pub fn kronrod21<F>(f: F, a: f64, b: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let s = qk21(&f, a, b);
    (s.result, s.error)
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    result: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adaptive<F>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> QuadratureResult
where
    F: Fn(f64) -> f64,
{
    let first = qk21(f, a, b);
    let mut heap = BinaryHeap::new();
    let mut frozen_result = 0.0;
    let mut frozen_error = 0.0;
    let mut total = first.result;
    let mut total_err = first.error;
    heap.push(Segment {
        a,
        b,
        result: first.result,
        error: first.error,
    });
    let mut subdivisions = 1;

    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= target {
            return QuadratureResult {
                value: total,
                abs_error_estimate: total_err,
                subdivisions,
                converged: true,
            };
        }
        if subdivisions >= cfg.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let width_floor = MIN_RELATIVE_WIDTH * worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= width_floor || mid <= worst.a || mid >= worst.b {
            frozen_result += worst.result;
            frozen_error += worst.error;
            continue;
        }
        let left = qk21(f, worst.a, mid);
        let right = qk21(f, mid, worst.b);
        subdivisions += 1;
        total += left.result + right.result - worst.result;
        total_err += left.error + right.error - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            result: left.result,
            error: left.error,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            result: right.result,
            error: right.error,
        });
        // Re-sum periodically so the running totals do not drift.
        if subdivisions % 64 == 0 {
            total = frozen_result + heap.iter().map(|s| s.result).sum::<f64>();
            total_err = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
        }
    }

    let value = frozen_result + heap.iter().map(|s| s.result).sum::<f64>();
    let err = frozen_error + heap.iter().map(|s| s.error).sum::<f64>();
    let target = cfg.abs_tol.max(cfg.rel_tol * value.abs());
    QuadratureResult {
        value,
        abs_error_estimate: err,
        subdivisions,
        converged: err <= target,
    }
}

struct Panel {
    result: f64,
    error: f64,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::needless_range_loop)]
fn qk21<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = (fc * WGK[10]).abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !result.is_finite() {
        err = f64::INFINITY;
    }
    Panel { result, error: err }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn exponential_on_half_line() {
        let r = integrate(|x: f64| (-x).exp(), 0.0, f64::INFINITY, 1e-10);
        assert!(r.converged);
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
    }

    #[test]
    fn inverse_sqrt_singularity_at_zero() {
        let r = integrate(|x: f64| (-x).exp() / x.sqrt(), 0.0, f64::INFINITY, 1e-10);
        assert!(r.converged);
        assert!((r.value - PI.sqrt()).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn essential_zero_at_origin() {
        // ∫₀^∞ x^{-2} e^{-1/x - x} dx = 2 K_1(2)
        let r = integrate(|x: f64| (-1.0 / x - x).exp() / (x * x), 0.0, f64::INFINITY, 1e-12);
        assert!(r.converged);
        assert!((r.value - 2.0 * 0.139_865_881_816_522_42).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let fwd = integrate(|x: f64| x * x, 0.0, 2.0, 1e-12);
        let back = integrate(|x: f64| x * x, 2.0, 0.0, 1e-12);
        assert!((fwd.value - 8.0 / 3.0).abs() < 1e-13);
        assert_eq!(fwd.value, -back.value);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let cfg = QuadConfig {
            abs_tol: 1e-15,
            rel_tol: 0.0,
            max_subdivisions: 3,
            tail_scale: 1.0,
        };
        let r = integrate_with(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &cfg);
        assert!(!r.converged);
        assert!(r.value.is_finite());
    }

    #[test]
    fn tail_scale_changes_nothing_but_cost() {
        let f = |x: f64| (-x / 300.0).exp() / 300.0;
        let a = integrate_with(f, 0.0, f64::INFINITY, &QuadConfig::with_tolerances(1e-12, 0.0));
        let b = integrate_with(
            f,
            0.0,
            f64::INFINITY,
            &QuadConfig::with_tolerances(1e-12, 0.0).tail_scale(300.0),
        );
        assert!((a.value - 1.0).abs() < 1e-11);
        assert!((b.value - 1.0).abs() < 1e-11);
        assert!(b.subdivisions <= a.subdivisions);
    }
}
