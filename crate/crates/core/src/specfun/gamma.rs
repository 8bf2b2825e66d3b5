use num_complex::Complex64;

use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

// B_{2k} / (2k (2k - 1)) for k = 1..8.
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

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + HALF_LN_2PI + series
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Principal branch of `ln Γ(z)`: analytic off the non-positive real axis
/// and real on the positive real axis (the convention of mpmath/scipy
/// `loggamma`).
pub fn complex_ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("ln_gamma of non-finite {z}")));
    }
    if is_pole(z) {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    Ok(ln_gamma_unchecked(z))
}

pub(crate) fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < -40.0 && z.im != 0.0 {
        // Reflection; the 2πi offset keeps the branch continuous with the
        // recurrence used nearer the origin.
        let offset = std::f64::consts::TAU.copysign(z.im) * (0.5 * z.re + 0.25).floor();
        let sin = (z * std::f64::consts::PI).sin();
        return Complex64::new(LN_PI, offset) - sin.ln() - ln_gamma_unchecked(1.0 - z);
    }
    let mut w = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 12.0 {
        acc += w.ln();
        w += 1.0;
    }
    stirling(w) - acc
}

/// `ln Γ(z)` up to a multiple of `2πi`, for callers that only exponentiate
/// the result or read its real part. The recurrence shifts are multiplied
/// together and logged once.
pub(crate) fn ln_gamma_phase(z: Complex64) -> Complex64 {
    if z.re < -40.0 && z.im != 0.0 {
        return ln_gamma_unchecked(z);
    }
    let mut w = z;
    let mut prod = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    while w.re < 12.0 {
        prod *= w;
        let size = prod.re.abs() + prod.im.abs();
        if !(1e-150..=1e150).contains(&size) {
            acc += prod.ln();
            prod = Complex64::new(1.0, 0.0);
        }
        w += 1.0;
    }
    stirling(w) - acc - prod.ln()
}

/// `ln |Γ(x)|` for real `x`; `None` at the poles.
pub(crate) fn ln_gamma_abs(x: f64) -> Option<f64> {
    if x <= 0.0 && x == x.round() {
        return None;
    }
    if x > 0.0 {
        return Some(statrs::function::gamma::ln_gamma(x));
    }
    Some(ln_gamma_unchecked(Complex64::new(x, 0.0)).re)
}

/// Real `Γ(x)` through the log route; used for moderate arguments only.
pub(crate) fn gamma_real(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}
