use crate::error::{Error, Result};

// Stirling series coefficients B_{2k} / (2k (2k − 1)) for k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_THRESHOLD: f64 = 15.0;

/// `ln Γ(x)` for `x > 0`.
///
/// Arguments below 15 are shifted up with `Γ(x) = Γ(x + n) / (x ⋯ (x + n − 1))`
/// and the Stirling series is summed at the shifted point.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "log_gamma",
            format!("x = {x} must be positive and finite"),
        ));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut z = x;
    let mut log_shift = 0.0;
    if z < STIRLING_THRESHOLD {
        let mut prod = 1.0;
        while z < STIRLING_THRESHOLD {
            prod *= z;
            z += 1.0;
        }
        log_shift = prod.ln();
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in STIRLING {
        series += c * pow;
        pow *= inv2;
    }
    let half_ln_two_pi = 0.918_938_533_204_672_7;
    Ok((z - 0.5) * z.ln() - z + half_ln_two_pi + series - log_shift)
}
