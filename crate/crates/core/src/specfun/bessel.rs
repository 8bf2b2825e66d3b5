use crate::error::{Error, Result};

use super::gamma::ln_gamma_abs;

/// Beyond this the result overflows `f64`; callers needing the product
/// `e^{-a x} I_ν(b x)` should work from its power series instead.
const OVERFLOW_X: f64 = 700.0;

/// Modified Bessel function of the first kind, `I_ν(x)`, for real order
/// `ν > -1` and `x ≥ 0`.
///
/// Power series for `x ≤ 50` (all terms positive, so no cancellation);
/// Hankel asymptotic expansion above that.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_i requires x >= 0, got {x}")));
    }
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_i order must exceed -1, got {nu}"
        )));
    }
    if x > OVERFLOW_X {
        return Err(Error::Overflow(format!("I_{nu}({x}) exceeds f64 range")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if x <= 50.0 || x < nu * nu {
        Ok(series(nu, x))
    } else {
        Ok(asymptotic(nu, x))
    }
}

fn series(nu: f64, x: f64) -> f64 {
    let half = 0.5 * x;
    let ln_first = nu * half.ln() - ln_gamma_abs(nu + 1.0).unwrap_or(0.0);
    let q = half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * (k + nu));
        sum += term;
        if term < 1e-17 * sum || k > 2000.0 {
            break;
        }
    }
    (ln_first + sum.ln()).exp()
}

fn asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = -term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    (x - 0.5 * (std::f64::consts::TAU * x).ln()).exp() * sum
}
