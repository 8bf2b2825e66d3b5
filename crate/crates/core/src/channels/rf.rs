//! α-η-μ fading SNR for the main (source–relay) and eavesdropper links.
//!
//! Writing `w = (γ/ω)^α̃` with `α̃ = α/2`, the model is `w = X + Y` with
//! independent `X ~ Gamma(μ, 1/(μ(1+η)))` and `Y ~ Gamma(μ, η/(μ(1+η)))`.
//! Expanding the Bessel factor of the density gives the series
//! `f(γ) = Σ_N u1(N) γ^{u3(N)} e^{-u2 γ^α̃}` whose terms integrate to
//! Gamma-type masses summing to one.

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::specfun::{bessel_i, gamma_real, ln_gamma_abs, lower_inc_gamma_reg, Precision};

use super::{SeedStream, SnrSample};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Smallest admissible `|η − 1|`; the Bessel-form constants degenerate at 1.
pub const ETA_GUARD: f64 = 1e-6;

/// Parameters of one α-η-μ link; `omega` is linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfFadingParams {
    pub alpha: f64,
    pub eta: f64,
    pub mu: f64,
    pub omega: f64,
}

impl RfFadingParams {
    pub fn new(alpha: f64, eta: f64, mu: f64, omega: f64) -> Result<Self> {
        let p = Self {
            alpha,
            eta,
            mu,
            omega,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`RfFadingParams::new`] with the average SNR in dB.
    pub fn with_omega_db(alpha: f64, eta: f64, mu: f64, omega_db: f64) -> Result<Self> {
        Self::new(alpha, eta, mu, db_to_linear(omega_db))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if !(self.mu >= 0.5) || !self.mu.is_finite() {
            return bad(format!("mu must be at least 0.5, got {}", self.mu));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return bad(format!("omega must be positive, got {}", self.omega));
        }
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return bad(format!("eta must be positive, got {}", self.eta));
        }
        if (self.eta - 1.0).abs() < ETA_GUARD {
            return bad(format!(
                "|eta - 1| must be at least {ETA_GUARD:e} (use e.g. 1.0001 for eta ≈ 1), got {}",
                self.eta
            ));
        }
        Ok(())
    }

    pub fn alpha_tilde(&self) -> f64 {
        0.5 * self.alpha
    }

    /// `S = √π α̃ μ^{μ+½} (η−1)^{½−μ} (η+1)^{μ+½} / (√η Γ(μ))`. Real only
    /// for `η > 1` or half-integer `μ`; `NaN` otherwise.
    pub fn s_const(&self) -> f64 {
        let (mu, eta) = (self.mu, self.eta);
        SQRT_PI
            * self.alpha_tilde()
            * mu.powf(mu + 0.5)
            * (eta - 1.0).powf(0.5 - mu)
            * (eta + 1.0).powf(mu + 0.5)
            / (eta.sqrt() * gamma_real(mu))
    }

    /// `A = μ(1+η)² / (2η)`.
    pub fn a_const(&self) -> f64 {
        self.mu * (1.0 + self.eta).powi(2) / (2.0 * self.eta)
    }

    /// `β = α̃(μ + ½)`.
    pub fn beta_const(&self) -> f64 {
        self.alpha_tilde() * (self.mu + 0.5)
    }

    /// `P = μ(η² − 1) / (2η)`.
    pub fn p_const(&self) -> f64 {
        self.mu * (self.eta * self.eta - 1.0) / (2.0 * self.eta)
    }

    /// Expand the density into its Gamma-type series.
    pub fn series(&self, prec: &Precision) -> Result<RfSeries> {
        RfSeries::new(self, prec)
    }

    /// Density from the Bessel form `S/ω^β γ^{β−1} e^{−A(γ/ω)^α̃}
    /// I_{μ−½}(P(γ/ω)^α̃)`. Requires `η > 1`.
    pub fn pdf_bessel_form(&self, gamma: f64) -> Result<f64> {
        if self.eta < 1.0 {
            return Err(Error::Domain(
                "Bessel form needs eta > 1 (negative Bessel argument otherwise)".into(),
            ));
        }
        if !(gamma > 0.0) {
            return Err(Error::Domain(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        let w = (gamma / self.omega).powf(self.alpha_tilde());
        let beta = self.beta_const();
        let ln_front = self.s_const().ln() - beta * self.omega.ln() + (beta - 1.0) * gamma.ln()
            - self.a_const() * w;
        Ok(ln_front.exp() * bessel_i(self.mu - 0.5, self.p_const() * w)?)
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// One term `u1 γ^{u3} e^{−u2 γ^α̃}` of the density series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfTerm {
    pub index: usize,
    /// `ln u1`
    pub ln_coeff: f64,
    /// `u3`
    pub power: f64,
    /// `W = (u3 + 1)/α̃ = 2(μ + N)`
    pub shape: f64,
    /// Probability mass `u1 Γ(W) / (α̃ u2^W)` carried by the term.
    pub mass: f64,
}

impl RfTerm {
    pub fn coeff(&self) -> f64 {
        self.ln_coeff.exp()
    }
}

/// Truncated density series of an α-η-μ link (`u`-coefficients for the
/// main link, `q`-coefficients for the eavesdropper).
#[derive(Debug, Clone, PartialEq)]
pub struct RfSeries {
    pub alpha_tilde: f64,
    /// `u2 = A / ω^α̃`
    pub rate: f64,
    pub terms: Vec<RfTerm>,
    /// Upper bound on the probability mass dropped by truncation.
    pub truncation_bound: f64,
}

impl RfSeries {
    fn new(p: &RfFadingParams, prec: &Precision) -> Result<Self> {
        p.validate()?;
        let at = p.alpha_tilde();
        let (mu, eta, omega) = (p.mu, p.eta, p.omega);
        let nu = mu - 0.5;
        let ln_w = at * omega.ln();
        let rate = p.a_const() / omega.powf(at);
        let ln_rate = rate.ln();
        // S (P / 2ω^α̃)^ν with the sign-carrying (η−1) powers cancelled.
        let ln_lead = SQRT_PI.ln() + at.ln() + (mu + 0.5) * mu.ln() + (mu + 0.5) * (eta + 1.0).ln()
            - 0.5 * eta.ln()
            - ln_gamma_abs(mu).expect("mu > 0")
            + nu * (mu * (eta + 1.0) / (2.0 * eta)).ln()
            - nu * (2f64.ln() + ln_w)
            - p.beta_const() * omega.ln();
        let ratio = p.p_const().abs() / (2.0 * omega.powf(at));
        let ln_ratio = if ratio > 0.0 {
            ratio.ln()
        } else {
            f64::NEG_INFINITY
        };

        let mut terms = Vec::new();
        let mut total = 0.0_f64;
        let mut prev_mass = f64::INFINITY;
        for n in 0..prec.max_series_terms {
            let nf = n as f64;
            let ln_coeff = if n == 0 {
                ln_lead - ln_gamma_abs(mu + 0.5).expect("positive")
            } else if ratio == 0.0 {
                f64::NEG_INFINITY
            } else {
                ln_lead + 2.0 * nf * ln_ratio
                    - ln_gamma_abs(nf + 1.0).expect("positive")
                    - ln_gamma_abs(mu + 0.5 + nf).expect("positive")
            };
            let power = at * (nu + 2.0 * nf) + p.beta_const() - 1.0;
            let shape = 2.0 * (mu + nf);
            let mass = if ln_coeff == f64::NEG_INFINITY {
                0.0
            } else {
                (ln_coeff + ln_gamma_abs(shape).expect("positive") - at.ln() - shape * ln_rate)
                    .exp()
            };
            if mass == 0.0 && n > 0 {
                return Ok(Self {
                    alpha_tilde: at,
                    rate,
                    terms,
                    truncation_bound: (1.0 - total).abs().max(0.0),
                });
            }
            terms.push(RfTerm {
                index: n,
                ln_coeff,
                power,
                shape,
                mass,
            });
            total += mass;
            let r = mass / prev_mass;
            prev_mass = mass;
            if n > 0 && r < 1.0 {
                // Ratio-test bound on the remaining geometric tail.
                let tail = mass * r / (1.0 - r);
                if mass < 1e-12 * total && tail < 1e-12 * total {
                    return Ok(Self {
                        alpha_tilde: at,
                        rate,
                        terms,
                        truncation_bound: tail.max((1.0 - total).abs()),
                    });
                }
            }
        }
        Err(Error::SeriesNonConvergence {
            terms: prec.max_series_terms,
        })
    }

    pub fn pdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        let lg = gamma.ln();
        let x = self.rate * gamma.powf(self.alpha_tilde);
        self.terms
            .iter()
            .map(|t| (t.ln_coeff + t.power * lg - x).exp())
            .sum()
    }

    /// CDF through the regularized incomplete gamma, valid for any `μ`.
    pub fn cdf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 0.0;
        }
        if gamma.is_infinite() {
            return 1.0;
        }
        let x = self.rate * gamma.powf(self.alpha_tilde);
        let v: f64 = self
            .terms
            .iter()
            .map(|t| t.mass * lower_inc_gamma_reg(t.shape, x).unwrap_or(1.0))
            .sum();
        v.clamp(0.0, 1.0)
    }

    /// Survival function `1 − F`, kept accurate in the upper tail.
    pub fn sf(&self, gamma: f64) -> f64 {
        if !(gamma > 0.0) {
            return 1.0;
        }
        let x = self.rate * gamma.powf(self.alpha_tilde);
        let v: f64 = self
            .terms
            .iter()
            .map(|t| t.mass * crate::specfun::upper_inc_gamma_reg(t.shape, x).unwrap_or(0.0))
            .sum();
        v.clamp(0.0, 1.0)
    }

    /// Whether `2μ` is a positive integer, so every shape `W` is integral
    /// and the finite-sum CDF applies.
    pub fn has_integer_shapes(&self) -> bool {
        self.terms
            .iter()
            .all(|t| (t.shape - t.shape.round()).abs() < 1e-12 && t.shape >= 1.0)
    }

    /// Coefficients `u4(N, t) = (W−1)! u1 / (α̃ u2^W) · u2^t / t!` of the
    /// finite-sum CDF `F = 1 − Σ_N Σ_t u4 e^{−u2 γ^α̃} γ^{α̃ t}`, returned as
    /// `(N, t, u4)`.
    pub fn finite_sum_coeffs(&self) -> Result<Vec<(usize, usize, f64)>> {
        if !self.has_integer_shapes() {
            return Err(Error::Precondition(
                "finite-sum CDF needs 2·mu to be a positive integer".into(),
            ));
        }
        let mut out = Vec::new();
        let ln_rate = self.rate.ln();
        for term in &self.terms {
            let w = term.shape.round() as usize;
            for t in 0..w {
                let ln = term.mass.ln() + t as f64 * ln_rate
                    - ln_gamma_abs(t as f64 + 1.0).expect("positive");
                out.push((term.index, t, ln.exp()));
            }
        }
        Ok(out)
    }

    /// The finite-sum CDF (integer `2μ` only).
    pub fn cdf_finite_sum(&self, gamma: f64) -> Result<f64> {
        let coeffs = self.finite_sum_coeffs()?;
        if !(gamma > 0.0) {
            return Ok(0.0);
        }
        let x = self.rate * gamma.powf(self.alpha_tilde);
        let lg = self.alpha_tilde * gamma.ln();
        let tail: f64 = coeffs
            .iter()
            .map(|&(_, t, c)| c * (-x + t as f64 * lg).exp())
            .sum();
        Ok(1.0 - tail)
    }
}

/// Draw one SNR value.
pub fn rf_draw<R: Rng + ?Sized>(p: &RfFadingParams, rng: &mut R) -> f64 {
    let shape = p.mu;
    let s1 = 1.0 / (p.mu * (1.0 + p.eta));
    let s2 = p.eta * s1;
    let gx = Gamma::new(shape, s1).expect("validated shape/scale");
    let gy = Gamma::new(shape, s2).expect("validated shape/scale");
    let w: f64 = gx.sample(rng) + gy.sample(rng);
    p.omega * w.powf(1.0 / p.alpha_tilde())
}

/// Reusable sampler with the gamma distributions prebuilt.
#[derive(Debug, Clone, Copy)]
pub struct RfSampler {
    gx: Gamma<f64>,
    gy: Gamma<f64>,
    omega: f64,
    inv_alpha_tilde: f64,
}

impl RfSampler {
    pub fn new(p: &RfFadingParams) -> Result<Self> {
        p.validate()?;
        let s1 = 1.0 / (p.mu * (1.0 + p.eta));
        let map = |e: rand_distr::GammaError| Error::InvalidParameter(e.to_string());
        Ok(Self {
            gx: Gamma::new(p.mu, s1).map_err(map)?,
            gy: Gamma::new(p.mu, p.eta * s1).map_err(map)?,
            omega: p.omega,
            inv_alpha_tilde: 1.0 / p.alpha_tilde(),
        })
    }

    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let w: f64 = self.gx.sample(rng) + self.gy.sample(rng);
        self.omega * w.powf(self.inv_alpha_tilde)
    }
}

pub fn rf_pdf(p: &RfFadingParams, gamma: f64, prec: &Precision) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "gamma must be positive, got {gamma}"
        )));
    }
    Ok(p.series(prec)?.pdf(gamma))
}

pub fn rf_cdf(p: &RfFadingParams, gamma: f64, prec: &Precision) -> Result<f64> {
    if !(gamma >= 0.0) {
        return Err(Error::Domain(format!(
            "gamma must be non-negative, got {gamma}"
        )));
    }
    Ok(p.series(prec)?.cdf(gamma))
}

/// `n` i.i.d. draws from the stream.
pub fn rf_sample(p: &RfFadingParams, stream: SeedStream, n: usize) -> Result<Vec<SnrSample>> {
    let sampler = RfSampler::new(p)?;
    let mut rng = stream.rng();
    Ok((0..n).map(|_| SnrSample(sampler.draw(&mut rng))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn masses_sum_to_one() {
        for &(a, e, m, w) in &[
            (4.0, 1.0001, 1.0, 10.0),
            (2.0, 0.3, 1.5, 2.0),
            (3.0, 4.0, 0.75, 0.5),
            (2.0, 1.0001, 0.5, 1.0),
        ] {
            let s = RfFadingParams::new(a, e, m, w)
                .unwrap()
                .series(&prec())
                .unwrap();
            let total: f64 = s.terms.iter().map(|t| t.mass).sum();
            assert!((total - 1.0).abs() < 1e-11, "{a} {e} {m} {w}: {total}");
        }
    }

    #[test]
    fn shape_identity() {
        let p = RfFadingParams::new(3.0, 2.5, 1.7, 3.0).unwrap();
        let s = p.series(&prec()).unwrap();
        for t in &s.terms {
            // W = (u3 + 1)/α̃ = 2(μ + N)
            assert!(((t.power + 1.0) / s.alpha_tilde - t.shape).abs() < 1e-12);
            assert!((t.shape - 2.0 * (p.mu + t.index as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_guard() {
        assert!(RfFadingParams::new(2.0, 1.0, 1.0, 1.0).is_err());
        assert!(RfFadingParams::new(2.0, 1.0 + 2e-6, 1.0, 1.0).is_ok());
        assert!(RfFadingParams::new(2.0, 1.5, 0.4, 1.0).is_err());
    }

    #[test]
    fn finite_sum_requires_integer_two_mu() {
        let s = RfFadingParams::new(2.0, 2.0, 0.8, 1.0)
            .unwrap()
            .series(&prec())
            .unwrap();
        assert!(matches!(s.cdf_finite_sum(1.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn sample_empty() {
        let p = RfFadingParams::new(2.0, 2.0, 1.0, 1.0).unwrap();
        assert!(rf_sample(&p, SeedStream::new(1, 0), 0).unwrap().is_empty());
    }
}
