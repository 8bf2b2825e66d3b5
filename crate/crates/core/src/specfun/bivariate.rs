//! Extended generalized bivariate Fox H function as a nested double
//! Mellin–Barnes integral:
//!
//! ```text
//! H[x, y] = 1/(2πi)² ∫∫ J(s, t) Φ₁(s) Φ₂(t) x^s y^t ds dt
//! ```
//!
//! `Φ₁`, `Φ₂` are univariate Fox H kernels and `J` is the joint group whose
//! gamma arguments depend linearly on both `s` and `t`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

use super::gamma::ln_gamma_phase;
use super::mellin::{choose_abscissa, truncation_point, Evaluation, GammaTriple, Precision};

/// One joint parameter `(coeff, scale_x, scale_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointParam {
    pub coeff: f64,
    pub scale_x: f64,
    pub scale_y: f64,
}

impl JointParam {
    pub fn new(coeff: f64, scale_x: f64, scale_y: f64) -> Self {
        Self {
            coeff,
            scale_x,
            scale_y,
        }
    }
}

/// Joint gamma group, with the same left/right conventions as
/// [`GammaTriple`]:
///
/// * `upper_left`  — numerator `Γ(1 − a + A s + A' t)`
/// * `upper_right` — denominator `Γ(a − A s − A' t)`
/// * `lower_left`  — numerator `Γ(b − B s − B' t)`
/// * `lower_right` — denominator `Γ(1 − b + B s + B' t)`
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JointGroup {
    pub upper_left: Vec<JointParam>,
    pub upper_right: Vec<JointParam>,
    pub lower_left: Vec<JointParam>,
    pub lower_right: Vec<JointParam>,
}

impl JointGroup {
    pub fn is_empty(&self) -> bool {
        self.upper_left.is_empty()
            && self.upper_right.is_empty()
            && self.lower_left.is_empty()
            && self.lower_right.is_empty()
    }

    fn all(&self) -> impl Iterator<Item = &JointParam> {
        self.upper_left
            .iter()
            .chain(&self.upper_right)
            .chain(&self.lower_left)
            .chain(&self.lower_right)
    }

    fn ln_value(&self, s: Complex64, t: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.upper_left {
            acc += ln_gamma_phase(1.0 - p.coeff + p.scale_x * s + p.scale_y * t);
        }
        for p in &self.lower_left {
            acc += ln_gamma_phase(p.coeff - p.scale_x * s - p.scale_y * t);
        }
        for p in &self.upper_right {
            let z = p.coeff - p.scale_x * s - p.scale_y * t;
            if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
                return None;
            }
            acc -= ln_gamma_phase(z);
        }
        for p in &self.lower_right {
            let z = 1.0 - p.coeff + p.scale_x * s + p.scale_y * t;
            if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
                return None;
            }
            acc -= ln_gamma_phase(z);
        }
        Some(acc)
    }

    /// Smallest slack of the pole-separation constraints at `(cx, cy)`;
    /// positive means every numerator gamma argument has positive real part.
    fn slack(&self, cx: f64, cy: f64) -> f64 {
        let a = self
            .upper_left
            .iter()
            .map(|p| 1.0 - p.coeff + p.scale_x * cx + p.scale_y * cy);
        let b = self
            .lower_left
            .iter()
            .map(|p| p.coeff - p.scale_x * cx - p.scale_y * cy);
        a.chain(b).fold(f64::INFINITY, f64::min)
    }
}

/// Parameter block of a bivariate Fox H evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateHSpec {
    pub outer: JointGroup,
    pub inner_x: GammaTriple,
    pub inner_y: GammaTriple,
    pub x: f64,
    pub y: f64,
}

impl BivariateHSpec {
    pub fn validate(&self) -> Result<()> {
        self.inner_x.validate()?;
        self.inner_y.validate()?;
        for p in self.outer.all() {
            if !p.coeff.is_finite()
                || !(p.scale_x > 0.0)
                || !(p.scale_y > 0.0)
                || !p.scale_x.is_finite()
                || !p.scale_y.is_finite()
            {
                return Err(Error::InvalidParameter(format!(
                    "joint parameter {p:?} must have finite coefficient and positive scales"
                )));
            }
        }
        if !(self.x > 0.0) || !(self.y > 0.0) || !self.x.is_finite() || !self.y.is_finite() {
            return Err(Error::Domain(format!(
                "bivariate H arguments must be positive, got ({}, {})",
                self.x, self.y
            )));
        }
        Ok(())
    }
}

fn clamp_window(lo: f64, hi: f64) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + 20.0),
        (false, true) => (hi - 20.0, hi),
        (false, false) => (-10.0, 10.0),
    }
}

/// Pick the contour abscissae `(cx, cy)`.
///
/// A grid search over the admissible box keeps points whose joint slack is
/// at least a fifth of the best attainable, then minimizes the integrand
/// log-magnitude at the origin; a few rounds of coordinate-wise golden
/// section polish the choice.
fn choose_abscissae(spec: &BivariateHSpec, lnx: f64, lny: f64) -> Result<(f64, f64)> {
    let (lx, hx) = spec.inner_x.strip()?;
    let (ly, hy) = spec.inner_y.strip()?;
    let (wx0, wx1) = clamp_window(lx, hx);
    let (wy0, wy1) = clamp_window(ly, hy);
    let mx = 0.1 * (wx1 - wx0).min(1.0);
    let my = 0.1 * (wy1 - wy0).min(1.0);
    let (ax, bx, ay, by) = (wx0 + mx, wx1 - mx, wy0 + my, wy1 - my);

    let objective = |cx: f64, cy: f64| -> f64 {
        let s = Complex64::new(cx, 0.0);
        let t = Complex64::new(cy, 0.0);
        let j = spec.outer.ln_value(s, t).map(|v| v.re);
        let k1 = spec.inner_x.ln_kernel(s).map(|v| v.re);
        let k2 = spec.inner_y.ln_kernel(t).map(|v| v.re);
        match (j, k1, k2) {
            (Some(j), Some(k1), Some(k2)) if (j + k1 + k2).is_finite() => {
                j + k1 + k2 + cx * lnx + cy * lny
            }
            _ => f64::INFINITY,
        }
    };

    let n = 24;
    let mut grid = Vec::with_capacity((n + 1) * (n + 1));
    let mut best_slack = f64::NEG_INFINITY;
    for i in 0..=n {
        for k in 0..=n {
            let cx = ax + (bx - ax) * i as f64 / n as f64;
            let cy = ay + (by - ay) * k as f64 / n as f64;
            let sl = spec.outer.slack(cx, cy);
            best_slack = best_slack.max(sl);
            grid.push((cx, cy, sl));
        }
    }
    if !(best_slack > 0.0) {
        return Err(Error::ContourInfeasible {
            left: best_slack,
            right: 0.0,
        });
    }
    let need = if best_slack.is_infinite() {
        0.0
    } else {
        0.2 * best_slack.min(1.0)
    };
    let feasible = |cx: f64, cy: f64| {
        cx > lx && cx < hx && cy > ly && cy < hy && spec.outer.slack(cx, cy) >= need
    };
    let constrained = |cx: f64, cy: f64| {
        if feasible(cx, cy) {
            objective(cx, cy)
        } else {
            f64::INFINITY
        }
    };
    let (mut cx, mut cy) = grid
        .iter()
        .filter(|g| g.2 >= need)
        .map(|g| (g.0, g.1, objective(g.0, g.1)))
        .min_by(|a, b| a.2.total_cmp(&b.2))
        .map(|g| (g.0, g.1))
        .ok_or(Error::ContourInfeasible {
            left: best_slack,
            right: 0.0,
        })?;
    let hx_step = (bx - ax) / n as f64;
    let hy_step = (by - ay) / n as f64;
    for _ in 0..3 {
        let nx = choose_abscissa(|v| constrained(v, cy), cx - hx_step, cx + hx_step);
        if constrained(nx, cy) <= constrained(cx, cy) {
            cx = nx;
        }
        let ny = choose_abscissa(|v| constrained(cx, v), cy - hy_step, cy + hy_step);
        if constrained(cx, ny) <= constrained(cx, cy) {
            cy = ny;
        }
    }
    Ok((cx, cy))
}

/// Evaluate the bivariate H function by nested adaptive quadrature.
///
/// The inner (`y`-contour) integral runs to a tenth of the requested
/// relative tolerance; each level gets `max_contour_nodes` kernel
/// evaluations.
pub fn bivariate_fox_h(spec: &BivariateHSpec, prec: &Precision) -> Result<Evaluation> {
    spec.validate()?;
    prec.validate()?;
    for (name, k) in [("x", &spec.inner_x), ("y", &spec.inner_y)] {
        let d = k.decay();
        if !(d > 0.0) {
            return Err(Error::NonConvergence(format!(
                "inner {name} kernel has non-positive decay rate {d}"
            )));
        }
    }
    let lnx = spec.x.ln();
    let lny = spec.y.ln();
    let (cx, cy) = choose_abscissae(spec, lnx, lny)?;
    let s0 = Complex64::new(cx, 0.0);
    let t0 = Complex64::new(cy, 0.0);
    let joint0 = spec.outer.ln_value(s0, t0).map(|v| v.re).unwrap_or(0.0);
    let kx0 = spec
        .inner_x
        .ln_kernel(s0)
        .map(|v| v.re)
        .unwrap_or(f64::NEG_INFINITY);
    let ky0 = spec
        .inner_y
        .ln_kernel(t0)
        .map(|v| v.re)
        .unwrap_or(f64::NEG_INFINITY);
    let peak = joint0 + kx0 + ky0 + cx * lnx + cy * lny;
    if !peak.is_finite() {
        return Ok(Evaluation {
            value: 0.0,
            error: 0.0,
        });
    }

    // Per-axis truncation from the inner kernels; numerator joint gammas are
    // bounded by their value on the real axis.
    let mag_x = |t: f64| {
        spec.inner_x
            .ln_kernel(Complex64::new(cx, t))
            .map_or(f64::NEG_INFINITY, |v| v.re)
    };
    let mag_y = |t: f64| {
        spec.inner_y
            .ln_kernel(Complex64::new(cy, t))
            .map_or(f64::NEG_INFINITY, |v| v.re)
    };
    let cut = (1e-17_f64).ln();
    let peak_x = (0..40).map(|k| mag_x(0.25 * k as f64)).fold(kx0, f64::max);
    let peak_y = (0..40).map(|k| mag_y(0.25 * k as f64)).fold(ky0, f64::max);
    let (mut tx, _) = truncation_point(mag_x, peak_x + cut, 1.0)?;
    let (mut ty, _) = truncation_point(mag_y, peak_y + cut, 1.0)?;
    if !spec.outer.upper_right.is_empty() || !spec.outer.lower_right.is_empty() {
        // Joint denominators can grow along the contour; widen both windows.
        tx *= 2.0;
        ty *= 2.0;
    }

    let inner_prec_rel = (prec.rel_tol * 0.1).max(100.0 * f64::EPSILON);
    let abs_scaled = prec.abs_tol * 2.0 * std::f64::consts::PI.powi(2) * (-peak).exp();
    let abs_scaled = if abs_scaled.is_finite() {
        abs_scaled
    } else {
        f64::MAX
    };
    let inner_abs = 0.1 * abs_scaled / (2.0 * tx);
    let worst_inner = std::cell::Cell::new(0.0_f64);
    let inner_failed = std::cell::Cell::new(false);
    let inner_evals = std::cell::Cell::new(0usize);
    // The y kernel does not depend on the outer node, and the adaptive inner
    // rule revisits the same abscissae, so its values are memoized.
    let ky_cache: std::cell::RefCell<HashMap<u64, Option<Complex64>>> = Default::default();

    let outer = |tau_x: f64| -> f64 {
        let s = Complex64::new(cx, tau_x);
        let Some(kx) = spec.inner_x.ln_kernel(s) else {
            return 0.0;
        };
        let base = kx + s * lnx - peak;
        let f = |tau_y: f64| -> f64 {
            let t = Complex64::new(cy, tau_y);
            let ky = *ky_cache
                .borrow_mut()
                .entry(tau_y.to_bits())
                .or_insert_with(|| spec.inner_y.ln_kernel(t).map(|k| k + t * lny));
            match (spec.outer.ln_value(s, t), ky) {
                (Some(j), Some(ky)) => (base + j + ky).exp().re,
                _ => 0.0,
            }
        };
        let r = quad::integrate(
            f,
            -ty,
            ty,
            inner_abs,
            inner_prec_rel,
            prec.max_contour_nodes,
        );
        inner_evals.set(inner_evals.get() + r.evals);
        if !r.converged {
            inner_failed.set(true);
        }
        let rounding = 64.0 * f64::EPSILON * r.abs_integral;
        worst_inner.set(worst_inner.get().max(r.error + rounding));
        r.value
    };
    let res = quad::integrate(
        outer,
        0.0,
        tx,
        abs_scaled,
        prec.rel_tol,
        prec.max_contour_nodes,
    );
    let factor = peak.exp() / (2.0 * std::f64::consts::PI.powi(2));
    if inner_failed.get() || !res.converged {
        return Err(Error::NonConvergence(format!(
            "bivariate contour quadrature exhausted its budget ({} outer, {} inner evaluations)",
            res.evals,
            inner_evals.get()
        )));
    }
    let trunc = 1e-16 * (res.abs_integral + worst_inner.get() * tx);
    let error = res.error + worst_inner.get() * tx + 64.0 * f64::EPSILON * res.abs_integral + trunc;
    Ok(Evaluation {
        value: res.value * factor,
        error: error * factor,
    })
}
