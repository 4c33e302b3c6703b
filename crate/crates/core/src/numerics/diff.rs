//! Central finite differences with a step proportional to the abscissa.

/// Central difference `(f(x + h) − f(x − h)) / 2h` with `h = rel_step·x`.
/// Error is `O(h²)`.
pub fn differentiate<F>(f: F, x: f64, rel_step: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let h = rel_step * x.abs();
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Richardson extrapolation of two central differences (steps `h` and
/// `h/2`), cancelling the `h²` term. Error is `O(h⁴)`.
///
/// Used where the integrand varies on a scale comparable to the step, such
/// as `e^{−b/(2x)}` close to the origin.
pub fn differentiate_richardson<F>(f: F, x: f64, rel_step: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let coarse = differentiate(&f, x, rel_step);
    let fine = differentiate(&f, x, 0.5 * rel_step);
    (4.0 * fine - coarse) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_at_three() {
        let d = differentiate(|x| x * x, 3.0, 1e-5);
        assert!((d - 6.0).abs() < 1e-8, "{d}");
    }

    #[test]
    fn constant_has_zero_derivative() {
        assert_eq!(differentiate(|_| 4.2, 1.7, 1e-5), 0.0);
        assert_eq!(differentiate_richardson(|_| 4.2, 1.7, 1e-5), 0.0);
    }

    #[test]
    fn richardson_beats_plain_on_fast_exponential() {
        let f = |x: f64| (-0.05 / x).exp();
        let x = 1e-3;
        let exact = 0.05 * f(x) / (x * x);
        let plain = (differentiate(f, x, 1e-5) - exact).abs() / exact;
        let rich = (differentiate_richardson(f, x, 1e-5) - exact).abs() / exact;
        assert!(rich < 1e-9, "{rich}");
        assert!(rich < plain);
    }
}
