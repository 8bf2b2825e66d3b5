//! Málaga turbulence with zero-boresight pointing error on the relay →
//! destination optical hop.
//!
//! The irradiance is `I = X·Y·I_p` with `X` unit-mean Gamma(α_d) large
//! scale fading, `Y = |√(G Ω_d) + Z|²` (`G` unit-mean Gamma(β_d), `Z`
//! circular Gaussian of power `g_d`) and `I_p = U^{1/ε²}`. The electrical
//! SNR is `γ = u_r (I / E[I])^r` with `r = 1` for heterodyne and `r = 2` for
//! IM/DD detection.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{Error, Result};
use crate::specfun::{delta_list, ln_gamma_abs, meijer_g, Evaluation, GammaTriple, Precision};

use super::{SeedStream, SnrSample};

/// Optical detection technique.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Detection {
    /// Heterodyne detection, `r = 1`.
    Heterodyne,
    /// Intensity modulation / direct detection, `r = 2`.
    IntensityModulation,
}

impl Detection {
    pub fn r(self) -> usize {
        match self {
            Detection::Heterodyne => 1,
            Detection::IntensityModulation => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Detection::Heterodyne => "hd",
            Detection::IntensityModulation => "imdd",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hd" | "heterodyne" | "1" => Some(Detection::Heterodyne),
            "imdd" | "im/dd" | "im-dd" | "2" => Some(Detection::IntensityModulation),
            _ => None,
        }
    }
}

/// Parameters of the optical hop; `u_r` is the linear electrical SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsoChannelParams {
    pub alpha_d: f64,
    pub beta_d: u32,
    pub g_d: f64,
    pub omega_cap_d: f64,
    pub epsilon: f64,
    pub detection: Detection,
    pub u_r: f64,
}

impl FsoChannelParams {
    pub fn new(
        alpha_d: f64,
        beta_d: u32,
        g_d: f64,
        omega_cap_d: f64,
        epsilon: f64,
        detection: Detection,
        u_r: f64,
    ) -> Result<Self> {
        let p = Self {
            alpha_d,
            beta_d,
            g_d,
            omega_cap_d,
            epsilon,
            detection,
            u_r,
        };
        p.validate()?;
        Ok(p)
    }

    /// Build from the physical constituents: LOS power `omega`, total
    /// scatter power `b0 = 2b`, coupling `rho` and the LOS / coupled-scatter
    /// phase difference.
    #[allow(clippy::too_many_arguments)]
    pub fn from_constituents(
        alpha_d: f64,
        beta_d: u32,
        omega: f64,
        b0: f64,
        rho: f64,
        phase_diff: f64,
        epsilon: f64,
        detection: Detection,
        u_r: f64,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in [0, 1], got {rho}"
            )));
        }
        if !(omega >= 0.0) || !(b0 >= 0.0) || !phase_diff.is_finite() {
            return Err(Error::InvalidParameter(
                "omega and b0 must be non-negative, phase finite".into(),
            ));
        }
        let omega_cap_d = omega + b0 * rho + 2.0 * (b0 * rho * omega).sqrt() * phase_diff.cos();
        let g_d = b0 * (1.0 - rho);
        Self::new(
            alpha_d,
            beta_d,
            g_d,
            omega_cap_d.max(0.0),
            epsilon,
            detection,
            u_r,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha_d > 0.0) || !self.alpha_d.is_finite() {
            return bad(format!("alpha_d must be positive, got {}", self.alpha_d));
        }
        if self.beta_d < 1 {
            return bad("beta_d must be a positive integer".into());
        }
        if !(self.g_d >= 0.0) || !(self.omega_cap_d >= 0.0) {
            return bad("g_d and omega_cap_d must be non-negative".into());
        }
        if !(self.g_d + self.omega_cap_d > 0.0) || !(self.g_d + self.omega_cap_d).is_finite() {
            return bad("g_d + omega_cap_d must be positive and finite".into());
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.u_r > 0.0) || !self.u_r.is_finite() {
            return bad(format!("u_r must be positive, got {}", self.u_r));
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.detection.r()
    }

    fn eps2(&self) -> f64 {
        self.epsilon * self.epsilon
    }

    /// `B_d = ε² α β (g + Ω) / ((ε² + 1)(g β + Ω))`.
    pub fn b_const(&self) -> f64 {
        let (a, b, g, om) = (self.alpha_d, self.beta_d as f64, self.g_d, self.omega_cap_d);
        self.eps2() * a * b * (g + om) / ((self.eps2() + 1.0) * (g * b + om))
    }

    /// Per-term weights `A_d b_d(m)` for `m = 1..β_d`, in the cancelled form
    /// `2/Γ(α) · C(β−1, m−1)/(m−1)! · (gβ)^{β−m} Ω^{m−1} / (gβ + Ω)^{β−1}`
    /// that stays finite at `g_d = 0`.
    pub fn weights(&self) -> Vec<f64> {
        let b = self.beta_d as f64;
        let gb = self.g_d * b;
        let om = self.omega_cap_d;
        let total = gb + om;
        let lg_alpha = ln_gamma_abs(self.alpha_d).expect("alpha_d > 0");
        (1..=self.beta_d)
            .map(|m| {
                let mf = m as f64;
                let ln_binom = ln_gamma_abs(b).unwrap()
                    - ln_gamma_abs(mf).unwrap()
                    - ln_gamma_abs(b - mf + 1.0).unwrap();
                let ln_rest = ln_binom - ln_gamma_abs(mf).unwrap() + std::f64::consts::LN_2
                    - lg_alpha
                    - (b - 1.0) * total.ln();
                let pg = pow_or_one(gb, b - mf);
                let po = pow_or_one(om, mf - 1.0);
                ln_rest.exp() * pg * po
            })
            .collect()
    }

    /// PDF kernel `G^{3,0}_{1,3}[· | ε²+1; ε², α_d, m]`.
    pub fn pdf_kernel(&self, m: u32) -> GammaTriple {
        GammaTriple::meijer(
            &[],
            &[self.eps2() + 1.0],
            &[self.eps2(), self.alpha_d, m as f64],
            &[],
        )
    }

    /// `l1 = Δ(r, ε² + 1)`.
    pub fn l1(&self) -> Vec<f64> {
        delta_list(self.r(), self.eps2() + 1.0)
    }

    /// `l2 = Δ(r, ε²), Δ(r, α_d), Δ(r, m)`.
    pub fn l2(&self, m: u32) -> Vec<f64> {
        let r = self.r();
        let mut v = delta_list(r, self.eps2());
        v.extend(delta_list(r, self.alpha_d));
        v.extend(delta_list(r, m as f64));
        v
    }

    /// CDF kernel `G^{3r,1}_{r+1,3r+1}[· | 1, l1; l2, 0]`.
    pub fn cdf_kernel(&self, m: u32) -> GammaTriple {
        GammaTriple::meijer(&[1.0], &self.l1(), &self.l2(m), &[0.0])
    }

    /// `F = B_d^r / r^{2r}`.
    pub fn f_const(&self) -> f64 {
        let r = self.r() as f64;
        self.b_const().powf(r) / r.powf(2.0 * r)
    }

    /// Products `σ c_d(m)` multiplying each CDF Meijer G, with
    /// `σ = ε² A_d / (2^r (2π)^{r−1})` and `c_d = b_d r^{α_d + m − 1}`.
    pub fn cdf_weights(&self) -> Vec<f64> {
        let r = self.r() as f64;
        let pre = self.eps2() / (2f64.powf(r) * (2.0 * std::f64::consts::PI).powf(r - 1.0));
        self.weights()
            .into_iter()
            .zip(1..=self.beta_d)
            .map(|(w, m)| pre * w * r.powf(self.alpha_d + m as f64 - 1.0))
            .collect()
    }

    /// Argument of the CDF Meijer G at SNR `gamma`.
    pub fn cdf_argument(&self, gamma: f64) -> f64 {
        self.f_const() / self.u_r * gamma
    }

    /// `E[I] / A0 = (g + Ω) ε² / (ε² + 1)`.
    pub fn mean_irradiance(&self) -> f64 {
        (self.g_d + self.omega_cap_d) * self.eps2() / (self.eps2() + 1.0)
    }

    /// `E[I²] / A0²`.
    pub fn second_moment_irradiance(&self) -> f64 {
        let (a, b, g, om) = (self.alpha_d, self.beta_d as f64, self.g_d, self.omega_cap_d);
        let ey2 = 2.0 * g * (g + 2.0 * om) + om * om * (1.0 + 1.0 / b);
        (1.0 + 1.0 / a) * ey2 * self.eps2() / (self.eps2() + 2.0)
    }

    /// Ratio `u_r / γ̄_d` linking electrical to average SNR: 1 for
    /// heterodyne, `E[I]² / E[I²]` for IM/DD.
    pub fn electrical_to_average_ratio(&self) -> f64 {
        match self.detection {
            Detection::Heterodyne => 1.0,
            Detection::IntensityModulation => {
                self.mean_irradiance().powi(2) / self.second_moment_irradiance()
            }
        }
    }

    /// Average SNR `E[γ_d]`.
    pub fn average_snr(&self) -> f64 {
        self.u_r / self.electrical_to_average_ratio()
    }

    /// Same parameters with `u_r` set from the average SNR `γ̄_d`.
    pub fn with_average_snr(mut self, avg_snr: f64) -> Result<Self> {
        self.u_r = avg_snr * self.electrical_to_average_ratio();
        self.validate()?;
        Ok(self)
    }
}

fn pow_or_one(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        1.0
    } else {
        base.powf(exp)
    }
}

/// PDF with its absolute error estimate.
pub fn fso_pdf_eval(p: &FsoChannelParams, gamma: f64, prec: &Precision) -> Result<Evaluation> {
    p.validate()?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    let r = p.r() as f64;
    let x = p.b_const() * (gamma / p.u_r).powf(1.0 / r);
    let front = p.eps2() / (2f64.powf(r) * gamma);
    let mut value = 0.0;
    let mut error = 0.0;
    for (w, m) in p.weights().into_iter().zip(1..=p.beta_d) {
        if w == 0.0 {
            continue;
        }
        let g = meijer_g(&p.pdf_kernel(m), x, prec)?;
        value += front * w * g.value;
        error += front * w * g.error;
    }
    Ok(Evaluation {
        value: value.max(0.0),
        error,
    })
}

pub fn fso_pdf(p: &FsoChannelParams, gamma: f64, prec: &Precision) -> Result<f64> {
    Ok(fso_pdf_eval(p, gamma, prec)?.value)
}

/// CDF with its absolute error estimate (before clamping to `[0, 1]`).
pub fn fso_cdf_eval(p: &FsoChannelParams, gamma: f64, prec: &Precision) -> Result<Evaluation> {
    p.validate()?;
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!(
            "gamma must be non-negative, got {gamma}"
        )));
    }
    if gamma == 0.0 {
        return Ok(Evaluation {
            value: 0.0,
            error: 0.0,
        });
    }
    if gamma.is_infinite() {
        return Ok(Evaluation {
            value: 1.0,
            error: 0.0,
        });
    }
    let x = p.cdf_argument(gamma);
    let mut value = 0.0;
    let mut error = 0.0;
    for (w, m) in p.cdf_weights().into_iter().zip(1..=p.beta_d) {
        if w == 0.0 {
            continue;
        }
        let g = meijer_g(&p.cdf_kernel(m), x, prec)?;
        value += w * g.value;
        error += w * g.error;
    }
    Ok(Evaluation { value, error })
}

pub fn fso_cdf(p: &FsoChannelParams, gamma: f64, prec: &Precision) -> Result<f64> {
    Ok(fso_cdf_eval(p, gamma, prec)?.value.clamp(0.0, 1.0))
}

/// Direct sampler of the physical model `γ = u_r (X·Y·U^{1/ε²} / E[I])^r`.
#[derive(Debug, Clone, Copy)]
pub struct FsoGenerativeSampler {
    large: Gamma<f64>,
    shadow: Gamma<f64>,
    omega: f64,
    z_std: f64,
    inv_eps2: f64,
    inv_mean: f64,
    u_r: f64,
    r: i32,
}

impl FsoGenerativeSampler {
    pub fn new(p: &FsoChannelParams) -> Result<Self> {
        p.validate()?;
        let map = |e: rand_distr::GammaError| Error::InvalidParameter(e.to_string());
        let b = p.beta_d as f64;
        Ok(Self {
            large: Gamma::new(p.alpha_d, 1.0 / p.alpha_d).map_err(map)?,
            shadow: Gamma::new(b, 1.0 / b).map_err(map)?,
            omega: p.omega_cap_d,
            z_std: (0.5 * p.g_d).sqrt(),
            inv_eps2: 1.0 / p.eps2(),
            inv_mean: 1.0 / p.mean_irradiance(),
            u_r: p.u_r,
            r: p.r() as i32,
        })
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.large.sample(rng);
        let g = self.shadow.sample(rng);
        let zr: f64 = rng.sample(StandardNormal);
        let zi: f64 = rng.sample(StandardNormal);
        let re = (g * self.omega).sqrt() + self.z_std * zr;
        let im = self.z_std * zi;
        let y = re * re + im * im;
        // 1 − U avoids U = 0.
        let u: f64 = 1.0 - rng.random::<f64>();
        let ip = u.powf(self.inv_eps2);
        self.u_r * (x * y * ip * self.inv_mean).powi(self.r)
    }
}

/// Inverse-transform sampler on a cubic-Hermite table of the analytic CDF
/// over `ln γ`, with bisection inside the bracketing cell.
#[derive(Debug, Clone)]
pub struct FsoInverseSampler {
    ln_gamma: Vec<f64>,
    cdf: Vec<f64>,
    /// `dF / d ln γ = γ f(γ)` at the nodes.
    slope: Vec<f64>,
}

const TABLE_STEP: f64 = 0.1;
const TABLE_TAIL: f64 = 1e-11;

impl FsoInverseSampler {
    pub fn new(p: &FsoChannelParams, prec: &Precision) -> Result<Self> {
        p.validate()?;
        // Relative accuracy matters deep in the lower tail.
        let tp = Precision {
            abs_tol: 1e-300,
            ..*prec
        };
        let node = |lg: f64| -> Result<(f64, f64)> {
            let g = lg.exp();
            let f = fso_cdf_eval(p, g, &tp)?.value.clamp(0.0, 1.0);
            let d = g * fso_pdf_eval(p, g, &tp)?.value;
            Ok((f, d))
        };
        let centre = p.u_r.ln();
        let mut lo_nodes = Vec::new();
        let mut lg = centre;
        loop {
            let (f, d) = node(lg)?;
            lo_nodes.push((lg, f, d));
            if f < TABLE_TAIL || lg < centre - 700.0 {
                break;
            }
            lg -= TABLE_STEP;
        }
        lo_nodes.reverse();
        let mut lg = centre + TABLE_STEP;
        loop {
            let (f, d) = node(lg)?;
            lo_nodes.push((lg, f, d));
            if 1.0 - f < TABLE_TAIL || lg > centre + 60.0 {
                break;
            }
            lg += TABLE_STEP;
        }
        // Enforce monotone node values against contour round-off.
        let mut run = 0.0_f64;
        for n in lo_nodes.iter_mut() {
            run = run.max(n.1);
            n.1 = run;
        }
        Ok(Self {
            ln_gamma: lo_nodes.iter().map(|n| n.0).collect(),
            cdf: lo_nodes.iter().map(|n| n.1).collect(),
            slope: lo_nodes.iter().map(|n| n.2.max(0.0)).collect(),
        })
    }

    fn hermite(&self, i: usize, t: f64) -> f64 {
        let h = self.ln_gamma[i + 1] - self.ln_gamma[i];
        let (y0, y1) = (self.cdf[i], self.cdf[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1
    }

    /// Interpolated CDF.
    pub fn cdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        let lg = gamma.ln();
        let n = self.ln_gamma.len();
        if lg <= self.ln_gamma[0] {
            return self.cdf[0] * (self.slope_exponent_lo() * (lg - self.ln_gamma[0])).exp();
        }
        if lg >= self.ln_gamma[n - 1] {
            return 1.0;
        }
        let i = self.ln_gamma.partition_point(|&x| x <= lg) - 1;
        let t = (lg - self.ln_gamma[i]) / (self.ln_gamma[i + 1] - self.ln_gamma[i]);
        self.hermite(i, t).clamp(0.0, 1.0)
    }

    fn slope_exponent_lo(&self) -> f64 {
        if self.cdf[0] > 0.0 {
            (self.slope[0] / self.cdf[0]).max(1e-3)
        } else {
            1.0
        }
    }

    /// `F⁻¹(u)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let n = self.ln_gamma.len();
        if u <= self.cdf[0] {
            // Power-law lower tail F ∝ γ^k.
            if u <= 0.0 || self.cdf[0] <= 0.0 {
                return self.ln_gamma[0].exp();
            }
            let k = self.slope_exponent_lo();
            return (self.ln_gamma[0] + (u / self.cdf[0]).ln() / k).exp();
        }
        if u >= self.cdf[n - 1] {
            // Exponential-in-ln γ upper tail.
            let q = 1.0 - self.cdf[n - 1];
            let k = if q > 0.0 {
                (self.slope[n - 1] / q).max(1e-3)
            } else {
                1.0
            };
            let rest = (1.0 - u).max(f64::MIN_POSITIVE);
            let extra = if q > 0.0 {
                ((q / rest).ln() / k).max(0.0)
            } else {
                0.0
            };
            return (self.ln_gamma[n - 1] + extra).exp();
        }
        let i = self
            .cdf
            .partition_point(|&c| c <= u)
            .saturating_sub(1)
            .min(n - 2);
        let (mut a, mut b) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (a + b);
            if self.hermite(i, mid) < u {
                a = mid;
            } else {
                b = mid;
            }
            if b - a < 1e-13 {
                break;
            }
        }
        let t = 0.5 * (a + b);
        (self.ln_gamma[i] + t * (self.ln_gamma[i + 1] - self.ln_gamma[i])).exp()
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(rng.random::<f64>())
    }

    pub fn nodes(&self) -> usize {
        self.ln_gamma.len()
    }
}

/// `n` draws by inverse transform of the analytic CDF.
pub fn fso_sample(
    p: &FsoChannelParams,
    stream: SeedStream,
    n: usize,
    prec: &Precision,
) -> Result<Vec<SnrSample>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let s = FsoInverseSampler::new(p, prec)?;
    let mut rng = stream.rng();
    Ok((0..n).map(|_| SnrSample(s.draw(&mut rng))).collect())
}

/// `n` draws from the physical irradiance model.
pub fn fso_sample_generative(
    p: &FsoChannelParams,
    stream: SeedStream,
    n: usize,
) -> Result<Vec<SnrSample>> {
    let s = FsoGenerativeSampler::new(p)?;
    let mut rng = stream.rng();
    Ok((0..n).map(|_| SnrSample(s.draw(&mut rng))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strong(det: Detection) -> FsoChannelParams {
        FsoChannelParams::new(2.296, 2, 2.0, 2.0, 6.7, det, 10.0).unwrap()
    }

    #[test]
    fn weights_normalize() {
        for p in [
            strong(Detection::Heterodyne),
            FsoChannelParams::new(8.0, 4, 0.0, 1.0, 1.0, Detection::Heterodyne, 1.0).unwrap(),
            FsoChannelParams::new(4.2, 3, 2.0, 0.0, 1.0, Detection::Heterodyne, 1.0).unwrap(),
        ] {
            let s: f64 = p
                .weights()
                .iter()
                .enumerate()
                .map(|(k, w)| w * statrs::function::gamma::gamma(k as f64 + 1.0))
                .sum::<f64>()
                * statrs::function::gamma::gamma(p.alpha_d)
                / 2.0;
            assert!((s - 1.0).abs() < 1e-13, "{s}");
        }
    }

    #[test]
    fn list_lengths() {
        let p = strong(Detection::IntensityModulation);
        assert_eq!(p.l1().len(), 2);
        assert_eq!(p.l2(1).len(), 6);
    }

    #[test]
    fn cdf_limits() {
        let p = strong(Detection::Heterodyne);
        let prec = Precision::default();
        assert_eq!(fso_cdf(&p, 0.0, &prec).unwrap(), 0.0);
        let hi = fso_cdf(&p, 1e5, &prec).unwrap();
        assert!((hi - 1.0).abs() < 1e-6, "{hi}");
    }

    #[test]
    fn constituents() {
        let p = FsoChannelParams::from_constituents(
            2.0,
            2,
            1.0,
            0.5,
            1.0,
            0.0,
            2.0,
            Detection::Heterodyne,
            1.0,
        )
        .unwrap();
        assert!(p.g_d.abs() < 1e-15);
        assert!((p.omega_cap_d - (1.0 + 0.5 + 2.0 * 0.5f64.sqrt())).abs() < 1e-14);
        assert!(FsoChannelParams::from_constituents(
            2.0,
            2,
            1.0,
            0.5,
            1.5,
            0.0,
            2.0,
            Detection::Heterodyne,
            1.0
        )
        .is_err());
    }
}
