//! Univariate Meijer G and Fox H functions by Mellin–Barnes contour
//! quadrature.
//!
//! With `s = c + iτ` on a vertical line separating the two pole families,
//!
//! ```text
//! H(x) = (1/π) ∫₀^∞ Re[ Φ(c + iτ) x^(c + iτ) ] dτ
//! ```
//!
//! for real parameters, where `Φ` is the ratio of gamma products. `Φ` is
//! assembled in log space so large arguments (e.g. `ε² ≈ 45`) cannot
//! overflow intermediate products.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

use super::gamma::ln_gamma_phase;

/// Accuracy targets and work limits for special-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Precision {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_contour_nodes: usize,
    pub max_series_terms: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_contour_nodes: 4096,
            max_series_terms: 200,
        }
    }
}

impl Precision {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 100.0 * f64::EPSILON) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be at least 100 machine epsilons, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_contour_nodes < 15 || self.max_series_terms == 0 {
            return Err(Error::InvalidParameter(
                "node and series budgets must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Same budgets with tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: (self.rel_tol * factor).max(100.0 * f64::EPSILON),
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

/// A value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub error: f64,
}

/// One `(coefficient, scale)` pair of a Fox H parameter list. Meijer G
/// parameters carry scale 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaParam {
    pub coeff: f64,
    pub scale: f64,
}

impl GammaParam {
    pub fn new(coeff: f64, scale: f64) -> Self {
        Self { coeff, scale }
    }

    pub fn unit(coeff: f64) -> Self {
        Self { coeff, scale: 1.0 }
    }
}

/// Parameter groups of `H^{m,n}_{p,q}[x | (a,A); (b,B)]`.
///
/// * `upper_left`  — `a_1..a_n`, numerator `Γ(1 − a + A s)` (left poles)
/// * `upper_right` — `a_{n+1}..a_p`, denominator `Γ(a − A s)`
/// * `lower_left`  — `b_1..b_m`, numerator `Γ(b − B s)` (right poles)
/// * `lower_right` — `b_{m+1}..b_q`, denominator `Γ(1 − b + B s)`
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaTriple {
    pub upper_left: Vec<GammaParam>,
    pub upper_right: Vec<GammaParam>,
    pub lower_left: Vec<GammaParam>,
    pub lower_right: Vec<GammaParam>,
}

fn units(v: &[f64]) -> Vec<GammaParam> {
    v.iter().copied().map(GammaParam::unit).collect()
}

impl GammaTriple {
    /// Meijer `G^{m,n}_{p,q}` parameters: `(a_1..a_n), (a_{n+1}..a_p);
    /// (b_1..b_m), (b_{m+1}..b_q)`.
    pub fn meijer(an: &[f64], ap: &[f64], bm: &[f64], bq: &[f64]) -> Self {
        Self {
            upper_left: units(an),
            upper_right: units(ap),
            lower_left: units(bm),
            lower_right: units(bq),
        }
    }

    pub fn fox(an: &[(f64, f64)], ap: &[(f64, f64)], bm: &[(f64, f64)], bq: &[(f64, f64)]) -> Self {
        let conv = |v: &[(f64, f64)]| v.iter().map(|&(c, s)| GammaParam::new(c, s)).collect();
        Self {
            upper_left: conv(an),
            upper_right: conv(ap),
            lower_left: conv(bm),
            lower_right: conv(bq),
        }
    }

    /// `(m, n, p, q)`.
    pub fn orders(&self) -> (usize, usize, usize, usize) {
        let m = self.lower_left.len();
        let n = self.upper_left.len();
        (m, n, n + self.upper_right.len(), m + self.lower_right.len())
    }

    pub fn is_meijer(&self) -> bool {
        self.all().all(|p| p.scale == 1.0)
    }

    fn all(&self) -> impl Iterator<Item = &GammaParam> {
        self.upper_left
            .iter()
            .chain(&self.upper_right)
            .chain(&self.lower_left)
            .chain(&self.lower_right)
    }

    pub fn validate(&self) -> Result<()> {
        for p in self.all() {
            if !p.coeff.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite coefficient {}",
                    p.coeff
                )));
            }
            if !(p.scale > 0.0) || !p.scale.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "scales must be strictly positive, got {}",
                    p.scale
                )));
            }
        }
        Ok(())
    }

    /// Open interval of admissible `Re(s)`: `(rightmost left pole,
    /// leftmost right pole)`. Either end may be infinite.
    pub fn strip(&self) -> Result<(f64, f64)> {
        let lo = self
            .upper_left
            .iter()
            .map(|p| (p.coeff - 1.0) / p.scale)
            .fold(f64::NEG_INFINITY, f64::max);
        let hi = self
            .lower_left
            .iter()
            .map(|p| p.coeff / p.scale)
            .fold(f64::INFINITY, f64::min);
        if lo < hi {
            Ok((lo, hi))
        } else {
            Err(Error::ContourInfeasible {
                left: lo,
                right: hi,
            })
        }
    }

    /// Exponential decay rate `δ`: `|Φ(c + iτ)| ~ |τ|^ρ e^{-π δ |τ| / 2}`.
    pub fn decay(&self) -> f64 {
        let sum = |v: &[GammaParam]| v.iter().map(|p| p.scale).sum::<f64>();
        sum(&self.lower_left) + sum(&self.upper_left)
            - sum(&self.lower_right)
            - sum(&self.upper_right)
    }

    /// Algebraic exponent `ρ` of the large-`τ` envelope on `Re s = c`.
    fn envelope_power(&self, c: f64) -> f64 {
        let mut rho = 0.0;
        for p in &self.lower_left {
            rho += p.coeff - p.scale * c - 0.5;
        }
        for p in &self.upper_left {
            rho += 0.5 - p.coeff + p.scale * c;
        }
        for p in &self.lower_right {
            rho -= 0.5 - p.coeff + p.scale * c;
        }
        for p in &self.upper_right {
            rho -= p.coeff - p.scale * c - 0.5;
        }
        rho
    }

    /// `ln Φ(s)`, or `None` when a denominator gamma sits on a pole
    /// (the kernel vanishes there).
    pub(crate) fn ln_kernel(&self, s: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.lower_left {
            acc += ln_gamma_phase(p.coeff - p.scale * s);
        }
        for p in &self.upper_left {
            acc += ln_gamma_phase(1.0 - p.coeff + p.scale * s);
        }
        for p in &self.lower_right {
            let z = 1.0 - p.coeff + p.scale * s;
            if on_pole(z) {
                return None;
            }
            acc -= ln_gamma_phase(z);
        }
        for p in &self.upper_right {
            let z = p.coeff - p.scale * s;
            if on_pole(z) {
                return None;
            }
            acc -= ln_gamma_phase(z);
        }
        Some(acc)
    }

    /// `ln |Φ(c)|` on the real axis; `+∞` where the kernel vanishes so the
    /// contour search steers away from it.
    fn ln_kernel_real(&self, c: f64) -> f64 {
        match self.ln_kernel(Complex64::new(c, 0.0)) {
            Some(v) if v.re.is_finite() => v.re,
            _ => f64::INFINITY,
        }
    }
}

fn on_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Choose `Re s = c` inside `(lo, hi)` minimizing `ln|Φ(c)| + c ln x`, the
/// log-magnitude of the integrand at `τ = 0`. Margins keep the line away
/// from the bounding poles.
pub(crate) fn choose_abscissa(objective: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let golden = |mut a: f64, mut b: f64| -> f64 {
        let r = 0.618_033_988_749_894_9;
        let mut x1 = b - r * (b - a);
        let mut x2 = a + r * (b - a);
        let mut f1 = objective(x1);
        let mut f2 = objective(x2);
        for _ in 0..48 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = objective(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = objective(x2);
            }
            if (b - a).abs() < 1e-6 {
                break;
            }
        }
        if f1 <= f2 {
            x1
        } else {
            x2
        }
    };

    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let gap = hi - lo;
            let margin = 0.2 * gap.min(1.0);
            let (a, b) = (lo + margin, hi - margin);
            let n = 40;
            let step = (b - a) / n as f64;
            let mut best = (f64::INFINITY, 0.5 * (lo + hi));
            for k in 0..=n {
                let c = a + step * k as f64;
                let v = objective(c);
                if v < best.0 {
                    best = (v, c);
                }
            }
            if !best.0.is_finite() {
                return 0.5 * (lo + hi);
            }
            golden((best.1 - step).max(a), (best.1 + step).min(b))
        }
        (false, false) => 0.0,
        (lo_finite, _) => {
            // March away from the single finite end with growing steps.
            let (end, dir) = if lo_finite { (lo, 1.0) } else { (hi, -1.0) };
            let start = end + dir * 0.25;
            let mut pts = vec![(start, objective(start))];
            let mut offset = 0.5;
            while offset < 1e4 {
                let c = start + dir * offset;
                let v = objective(c);
                pts.push((c, v));
                let k = pts.len();
                if k >= 3 && pts[k - 1].1 > pts[k - 2].1 && pts[k - 2].1.is_finite() {
                    break;
                }
                offset *= 2.0;
            }
            let k = pts.len();
            let (best_idx, _) = pts
                .iter()
                .enumerate()
                .min_by(|x, y| x.1 .1.total_cmp(&y.1 .1))
                .expect("non-empty");
            if !pts[best_idx].1.is_finite() {
                return start;
            }
            let left = if best_idx == 0 {
                start
            } else {
                pts[best_idx - 1].0
            };
            let right = if best_idx + 1 < k {
                pts[best_idx + 1].0
            } else {
                pts[best_idx].0
            };
            let (a, b) = if left < right {
                (left, right)
            } else {
                (right, left)
            };
            golden(a, b)
        }
    }
}

/// Distance along `τ` beyond which `log_mag(τ)` has fallen below
/// `threshold` and is decreasing.
pub(crate) fn truncation_point(
    log_mag: impl Fn(f64) -> f64,
    threshold: f64,
    min_t: f64,
) -> Result<(f64, f64)> {
    let mut t = 1.0_f64.max(min_t * 0.5);
    let mut prev = log_mag(0.5 * t);
    for _ in 0..60 {
        let m = log_mag(t);
        if t >= min_t && m < threshold && m <= prev {
            return Ok((t, m));
        }
        prev = m;
        t *= 1.5;
        if t > 1e6 {
            break;
        }
    }
    Err(Error::NonConvergence(
        "contour integrand does not decay".into(),
    ))
}

/// Evaluate `H(x)` for the kernel on a vertical contour.
pub(crate) fn contour_integral(
    kernel: &GammaTriple,
    x: f64,
    prec: &Precision,
) -> Result<Evaluation> {
    kernel.validate()?;
    prec.validate()?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("argument must be positive, got {x}")));
    }
    let (lo, hi) = kernel.strip()?;
    let delta = kernel.decay();
    if !(delta > 0.0) {
        return Err(Error::NonConvergence(format!(
            "Mellin–Barnes kernel has non-positive decay rate {delta}"
        )));
    }
    if !lo.is_finite() && !hi.is_finite() {
        return Err(Error::InvalidParameter(
            "kernel has no poles on either side (m = n = 0)".into(),
        ));
    }
    let lnx = x.ln();
    let c = choose_abscissa(|c| kernel.ln_kernel_real(c) + c * lnx, lo, hi);

    let log_mag = |t: f64| -> f64 {
        match kernel.ln_kernel(Complex64::new(c, t)) {
            Some(v) => v.re + c * lnx,
            None => f64::NEG_INFINITY,
        }
    };
    let peak0 = log_mag(0.0);
    // The envelope can rise before it decays; sample it to find the peak.
    let rho = kernel.envelope_power(c).max(0.0);
    let hump = 2.0 * rho / (std::f64::consts::PI * delta);
    let mut peak = if peak0.is_finite() {
        peak0
    } else {
        f64::NEG_INFINITY
    };
    let mut t = 0.25;
    while t < hump.max(4.0) * 1.5 {
        peak = peak.max(log_mag(t));
        t *= 1.3;
    }
    if !peak.is_finite() {
        return Ok(Evaluation {
            value: 0.0,
            error: 0.0,
        });
    }
    let threshold = peak + (1e-17_f64).ln();
    let (tmax, m_tail) = truncation_point(log_mag, threshold, hump)?;

    let scale = peak;
    let f = |t: f64| -> f64 {
        match kernel.ln_kernel(Complex64::new(c, t)) {
            Some(v) => {
                let w = v + Complex64::new(c * lnx - scale, t * lnx);
                w.exp().re
            }
            None => 0.0,
        }
    };
    let abs_scaled = prec.abs_tol * std::f64::consts::PI * (-scale).exp();
    let res = quad::integrate(
        f,
        0.0,
        tmax,
        if abs_scaled.is_finite() {
            abs_scaled
        } else {
            f64::MAX
        },
        prec.rel_tol,
        prec.max_contour_nodes,
    );
    let factor = scale.exp() / std::f64::consts::PI;
    if !res.converged {
        return Err(Error::NonConvergence(format!(
            "contour quadrature exhausted {} nodes (estimate {:e}, error {:e})",
            res.evals,
            res.value * factor,
            res.error * factor
        )));
    }
    // Tail beyond tmax: envelope decays at least like e^{-π δ τ / 4} there.
    let tail = (m_tail - scale).exp() * 4.0 / (std::f64::consts::PI * delta);
    let roundoff = 64.0 * f64::EPSILON * res.abs_integral;
    Ok(Evaluation {
        value: res.value * factor,
        error: (res.error + tail + roundoff) * factor,
    })
}

/// Meijer `G^{m,n}_{p,q}[x]`. Every scale in `spec` must be 1.
pub fn meijer_g(spec: &GammaTriple, x: f64, prec: &Precision) -> Result<Evaluation> {
    if !spec.is_meijer() {
        return Err(Error::InvalidParameter(
            "Meijer G parameters must all have unit scale".into(),
        ));
    }
    contour_integral(spec, x, prec)
}

/// Fox `H^{m,n}_{p,q}[x]`.
pub fn fox_h(spec: &GammaTriple, x: f64, prec: &Precision) -> Result<Evaluation> {
    contour_integral(spec, x, prec)
}

/// The list `Δ(k, a) = (a/k, (a+1)/k, …, (a+k−1)/k)`.
pub fn delta_list(k: usize, a: f64) -> Vec<f64> {
    (0..k).map(|j| (a + j as f64) / k as f64).collect()
}
