//! Rejection samplers.
//!
//! * GIG: ratio-of-uniforms with the mode shifted to the origin, applied to
//!   the two-parameter form `GIG(|p|, ω, ω)` with `ω = √(ab)`, then scaled by
//!   `√(b/a)` (and inverted for `p < 0`).
//! * Kummer: Gamma proposal `x^{a−1} e^{−r x}`. For `a + b ≥ 0` the rate is
//!   `r = c` and the acceptance probability is `(1+x)^{−a−b}`. Otherwise the
//!   factor `(1+x)^{−a−b}` grows and is tempered by a slower rate `r < c`,
//!   chosen to maximize the acceptance probability.
//!
//! Draws are produced in chunks of [`SAMPLE_CHUNK`]; chunk `i` consumes the
//! random stream `(seed, i)`, so the batch does not depend on how chunks are
//! scheduled across threads.

use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::params::{FamilyParams, GigParams, KummerParams};
use crate::error::{Error, Result};
use crate::numerics::{rng_stream, RngStream};

pub const SAMPLE_CHUNK: usize = 4096;

/// Safety factor applied to the numerically maximized envelope bounds.
const ENVELOPE_INFLATION: f64 = 1e-9;
const GOLDEN: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplerMethod {
    #[serde(rename = "gig-rou-mode-shift")]
    GigRatioOfUniforms,
    #[serde(rename = "kummer-gamma-rejection")]
    KummerGamma,
    #[serde(rename = "kummer-tempered-gamma-rejection")]
    KummerTemperedGamma,
}

impl SamplerMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            SamplerMethod::GigRatioOfUniforms => "gig-rou-mode-shift",
            SamplerMethod::KummerGamma => "kummer-gamma-rejection",
            SamplerMethod::KummerTemperedGamma => "kummer-tempered-gamma-rejection",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub method: SamplerMethod,
    /// Accepted draws over proposals.
    pub acceptance_rate: f64,
    pub params: FamilyParams,
}

pub fn sample(params: &FamilyParams, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "sample size must be at least 1",
        });
    }
    let sampler = Sampler::new(params);
    let chunks = n.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<(Vec<f64>, u64)> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = SAMPLE_CHUNK.min(n - i * SAMPLE_CHUNK);
            sampler.draw_chunk(len, &mut rng_stream(seed, i as u64))
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    let mut proposals = 0u64;
    for (v, tries) in parts {
        values.extend_from_slice(&v);
        proposals += tries;
    }
    Ok(SampleBatch {
        values,
        seed,
        method: sampler.method(),
        acceptance_rate: n as f64 / proposals as f64,
        params: *params,
    })
}

/// [`sample`] on a dedicated pool of `threads` workers.
pub fn sample_with_threads(params: &FamilyParams, n: usize, seed: u64, threads: usize) -> Result<SampleBatch> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    pool.install(|| sample(params, n, seed))
}

enum Sampler {
    Gig(GigRou),
    Kummer(KummerGamma),
}

impl Sampler {
    fn new(params: &FamilyParams) -> Self {
        match params {
            FamilyParams::Gig(p) => Sampler::Gig(GigRou::new(p)),
            FamilyParams::Kummer(p) => Sampler::Kummer(KummerGamma::new(p)),
        }
    }

    fn method(&self) -> SamplerMethod {
        match self {
            Sampler::Gig(_) => SamplerMethod::GigRatioOfUniforms,
            Sampler::Kummer(k) if k.tempered => SamplerMethod::KummerTemperedGamma,
            Sampler::Kummer(_) => SamplerMethod::KummerGamma,
        }
    }

    fn draw_chunk(&self, len: usize, rng: &mut RngStream) -> (Vec<f64>, u64) {
        let mut out = Vec::with_capacity(len);
        let mut tries = 0u64;
        while out.len() < len {
            tries += 1;
            let x = match self {
                Sampler::Gig(s) => s.propose(rng),
                Sampler::Kummer(s) => s.propose(rng),
            };
            if let Some(x) = x {
                out.push(x);
            }
        }
        (out, tries)
    }
}

/// Maximizes a unimodal `f` over `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-14 * (lo.abs() + hi.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid scan over `[lo, hi]` followed by golden-section refinement
/// around the best grid point.
fn scan_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for i in 0..points {
        let v = f(lo + step * i as f64);
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let a = lo + step * best.saturating_sub(1) as f64;
    let b = lo + step * (best + 1).min(points - 1) as f64;
    let (_, v) = golden_max(&f, a, b);
    v.max(best_val)
}

struct GigRou {
    lambda: f64,
    omega: f64,
    mode: f64,
    log_q_mode: f64,
    v_minus: f64,
    v_plus: f64,
    scale: f64,
    invert: bool,
}

impl GigRou {
    fn new(params: &GigParams) -> Self {
        let lambda = params.p().abs();
        let omega = (params.a() * params.b()).sqrt();
        let mode = if lambda >= 1.0 {
            let l1 = lambda - 1.0;
            (l1 + (l1 * l1 + omega * omega).sqrt()) / omega
        } else {
            let l1 = 1.0 - lambda;
            omega / (l1 + (l1 * l1 + omega * omega).sqrt())
        };
        let mut s = Self {
            lambda,
            omega,
            mode,
            log_q_mode: 0.0,
            v_minus: 0.0,
            v_plus: 0.0,
            scale: (params.b() / params.a()).sqrt(),
            invert: params.p() < 0.0,
        };
        s.log_q_mode = s.log_q(mode);
        let m = mode;
        // Upper side: d = e^y, maximize y + ½ ln r(m + d).
        let upper = |y: f64| y + 0.5 * s.log_r(m + y.exp());
        let span = (m.max(1.0 / omega).max(1.0)).ln();
        let ln_v_plus = scan_max(upper, span - 30.0, span + 30.0, 601);
        // Lower side: x = m e^{−y}, d = m(1 − e^{−y}), y = e^t.
        let lower = |t: f64| {
            let y = t.exp();
            (-m * (-y).exp_m1()).ln() + 0.5 * s.log_r(m * (-y).exp())
        };
        let ln_v_minus = scan_max(lower, -40.0, 6.0, 601);
        s.v_plus = ln_v_plus.exp() * (1.0 + ENVELOPE_INFLATION);
        s.v_minus = -ln_v_minus.exp() * (1.0 + ENVELOPE_INFLATION);
        s
    }

    fn log_q(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.lambda - 1.0) * x.ln() - 0.5 * self.omega * (x + 1.0 / x)
    }

    fn log_r(&self, x: f64) -> f64 {
        self.log_q(x) - self.log_q_mode
    }

    fn propose(&self, rng: &mut RngStream) -> Option<f64> {
        let u = rng.uniform_open();
        let v = self.v_minus + (self.v_plus - self.v_minus) * rng.uniform();
        let y = self.mode + v / u;
        if y <= 0.0 || 2.0 * u.ln() > self.log_r(y) {
            return None;
        }
        Some(if self.invert { self.scale / y } else { self.scale * y })
    }
}

struct KummerGamma {
    a: f64,
    b: f64,
    c: f64,
    rate: f64,
    log_bound: f64,
    tempered: bool,
    gamma: Gamma<f64>,
}

impl KummerGamma {
    fn new(params: &KummerParams) -> Self {
        let (a, b, c) = (params.a(), params.b(), params.c());
        let k = -(a + b);
        let log_bound_at = |r: f64| {
            let x_star = (k / (c - r) - 1.0).max(0.0);
            k * x_star.ln_1p() - (c - r) * x_star
        };
        let (rate, log_bound, tempered) = if k <= 0.0 {
            (c, 0.0, false)
        } else {
            // Acceptance probability ∝ r^a / B(r).
            let objective = |t: f64| {
                let r = c * t;
                a * r.ln() - log_bound_at(r)
            };
            let (t, _) = golden_max(objective, 1e-12, 1.0 - 1e-12);
            let r = c * t;
            (r, log_bound_at(r), true)
        };
        let gamma = Gamma::new(a, 1.0 / rate).expect("shape and rate are positive");
        Self {
            a,
            b,
            c,
            rate,
            log_bound,
            tempered,
            gamma,
        }
    }

    fn propose(&self, rng: &mut RngStream) -> Option<f64> {
        let x = self.gamma.sample(rng);
        if !(x > 0.0) {
            return None;
        }
        let log_ratio = -(self.a + self.b) * x.ln_1p() - (self.c - self.rate) * x - self.log_bound;
        let u = rng.uniform_open();
        (u.ln() <= log_ratio).then_some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gig(p: f64, a: f64, b: f64) -> FamilyParams {
        GigParams::new(p, a, b).unwrap().into()
    }

    fn kummer(a: f64, b: f64, c: f64) -> FamilyParams {
        KummerParams::new(a, b, c).unwrap().into()
    }

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn zero_draws_is_an_error() {
        assert!(sample(&gig(-1.0, 2.0, 2.0), 0, 1).is_err());
    }

    #[test]
    fn deterministic_and_thread_count_independent() {
        for params in [gig(-1.0, 2.0, 2.0), kummer(1.0, 1.0, 1.0), kummer(2.0, -5.0, 1.5)] {
            let one = sample_with_threads(&params, 10_000, 9, 1).unwrap();
            let four = sample_with_threads(&params, 10_000, 9, 4).unwrap();
            assert_eq!(one, four);
            let again = sample(&params, 1000, 7).unwrap();
            assert_eq!(again, sample(&params, 1000, 7).unwrap());
            assert!(one.values.iter().all(|&x| x > 0.0));
            assert!(one.acceptance_rate > 0.0 && one.acceptance_rate <= 1.0);
        }
    }

    #[test]
    fn method_tags() {
        assert_eq!(
            sample(&gig(0.3, 1.0, 4.0), 5, 1).unwrap().method,
            SamplerMethod::GigRatioOfUniforms
        );
        assert_eq!(
            sample(&kummer(1.0, 1.0, 1.0), 5, 1).unwrap().method,
            SamplerMethod::KummerGamma
        );
        let tempered = sample(&kummer(2.0, -5.0, 1.5), 5, 1).unwrap();
        assert_eq!(tempered.method, SamplerMethod::KummerTemperedGamma);
        assert_eq!(
            serde_json::to_value(tempered.method).unwrap(),
            "kummer-tempered-gamma-rejection"
        );
    }

    #[test]
    fn gig_mean_matches_bessel_ratio() {
        // E[X] = √(b/a) K_{p+1}(ω) / K_p(ω)
        use crate::specfun::bessel_k;
        for (p, a, b) in [(-1.0, 2.0, 2.0), (2.5, 1.0, 3.0), (-0.3, 0.2, 0.5), (0.0, 10.0, 0.1)] {
            let w = f64::sqrt(a * b);
            let want = (b / a).sqrt() * (bessel_k(p + 1.0, w).unwrap().ln() - bessel_k(p, w).unwrap().ln()).exp();
            let batch = sample(&gig(p, a, b), 200_000, 3).unwrap();
            let m = mean(&batch.values);
            let sd = (batch.values.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 200_000.0).sqrt();
            let se = sd / (200_000f64).sqrt();
            assert!((m - want).abs() < 5.0 * se, "GIG({p},{a},{b}): {m} vs {want} (se {se})");
        }
    }
}
