//! Secrecy metrics of the wiretap scenario: average secrecy capacity (ASC),
//! the secrecy-outage lower bound `Pr{γ_o < θ γ_v}` and the probability of
//! non-zero secrecy capacity (PNSC).
//!
//! Each metric is available by closed form (Meijer G / Fox H sums), by
//! quadrature of the defining integral, and by Monte-Carlo simulation.

mod closed;
mod quadrature;

pub use closed::{
    asc_terms, h2_fox, sop_terms, AscIndices, AscTerms, SopIndices, SopTerms, TermPair,
};

use crate::channels::{FsoChannelParams, RfFadingParams};
use crate::error::{Error, Result};
use crate::montecarlo::{estimate_metrics, McConfig, McEstimate};
use crate::specfun::Precision;

/// Full wiretap configuration. `rate_rs` is the target secrecy rate in
/// bits/s/Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub main_rf: RfFadingParams,
    pub eve_rf: RfFadingParams,
    pub fso: FsoChannelParams,
    pub rate_rs: f64,
}

impl Scenario {
    pub fn new(
        main_rf: RfFadingParams,
        eve_rf: RfFadingParams,
        fso: FsoChannelParams,
        rate_rs: f64,
    ) -> Result<Self> {
        let s = Self {
            main_rf,
            eve_rf,
            fso,
            rate_rs,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.main_rf.validate()?;
        self.eve_rf.validate()?;
        self.fso.validate()?;
        if !(self.rate_rs >= 0.0) || !self.rate_rs.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "rate_rs must be finite and non-negative, got {}",
                self.rate_rs
            )));
        }
        Ok(())
    }

    /// `θ = 2^{R_s}`.
    pub fn theta(&self) -> f64 {
        2f64.powf(self.rate_rs)
    }

    pub fn with_rate(&self, rate_rs: f64) -> Self {
        Self { rate_rs, ..*self }
    }

    /// The integer `α̃` shared by both RF links, required by the closed forms.
    pub fn closed_form_alpha_tilde(&self) -> Result<usize> {
        let ar = self.main_rf.alpha_tilde();
        let av = self.eve_rf.alpha_tilde();
        if (ar - av).abs() > 1e-12 {
            return Err(Error::Precondition(format!(
                "closed form needs equal alpha on both RF links (alpha/2 = {ar} vs {av})"
            )));
        }
        if (ar - ar.round()).abs() > 1e-12 || ar < 1.0 {
            return Err(Error::Precondition(format!(
                "closed form needs alpha/2 to be a positive integer, got {ar}"
            )));
        }
        for (name, p) in [("main", &self.main_rf), ("eavesdropper", &self.eve_rf)] {
            let two_mu = 2.0 * p.mu;
            if (two_mu - two_mu.round()).abs() > 1e-12 {
                return Err(Error::Precondition(format!(
                    "closed form needs 2*mu to be an integer on the {name} link, got mu = {}",
                    p.mu
                )));
            }
        }
        Ok(ar.round() as usize)
    }
}

/// Evaluation route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::MonteCarlo => "monte_carlo",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "closed_form" | "closed" | "cf" => Some(Method::ClosedForm),
            "quadrature" | "quad" => Some(Method::Quadrature),
            "monte_carlo" | "mc" | "montecarlo" => Some(Method::MonteCarlo),
            _ => None,
        }
    }
}

/// Weighted term sums behind a closed-form value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Breakdown {
    /// `ASC = s1 − s3 − (s2 − s4)` with each part already weighted.
    Asc { s1: f64, s2: f64, s3: f64, s4: f64 },
    /// `P = 1 − (h1 − h2)`.
    Sop { h1: f64, h2: f64 },
}

/// A metric value with its error estimate: an absolute bound for the
/// analytic routes, one standard error for Monte-Carlo.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    pub detail: Option<Breakdown>,
    /// Full estimator for Monte-Carlo results.
    pub mc: Option<McEstimate>,
}

impl MetricResult {
    fn analytic(value: f64, method: Method, error: f64, detail: Option<Breakdown>) -> Self {
        Self {
            value,
            method,
            error_estimate: error,
            detail,
            mc: None,
        }
    }

    fn from_mc(e: McEstimate) -> Self {
        Self {
            value: e.mean,
            method: Method::MonteCarlo,
            error_estimate: e.std_error,
            detail: None,
            mc: Some(e),
        }
    }

    /// ASC values are in nats; this converts to bits.
    pub fn in_bits(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }

    fn clamp_unit(mut self) -> Self {
        self.value = self.value.clamp(0.0, 1.0);
        self
    }
}

/// Numerical settings shared by the three routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub precision: Precision,
    pub mc: McConfig,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            precision: Precision::default(),
            mc: McConfig::default(),
        }
    }
}

/// Average secrecy capacity in nats/s/Hz.
pub fn asc(s: &Scenario, method: Method, opts: &EvalOptions) -> Result<MetricResult> {
    s.validate()?;
    match method {
        Method::ClosedForm => closed::asc_closed(s, &opts.precision),
        Method::Quadrature => quadrature::asc_quadrature(s, &opts.precision),
        Method::MonteCarlo => Ok(MetricResult::from_mc(estimate_metrics(s, &opts.mc)?.asc)),
    }
}

/// Lower bound `Pr{γ_o < θ γ_v}` on the secrecy outage probability.
pub fn sop_lower(s: &Scenario, method: Method, opts: &EvalOptions) -> Result<MetricResult> {
    s.validate()?;
    let r = match method {
        Method::ClosedForm => closed::sop_closed(s, &opts.precision)?,
        Method::Quadrature => quadrature::sop_quadrature(s, &opts.precision)?,
        Method::MonteCarlo => MetricResult::from_mc(estimate_metrics(s, &opts.mc)?.sop_lower),
    };
    Ok(r.clamp_unit())
}

/// Probability of non-zero secrecy capacity, `1 − sop_lower` at `R_s = 0`.
pub fn pnsc(s: &Scenario, method: Method, opts: &EvalOptions) -> Result<MetricResult> {
    let mut r = sop_lower(&s.with_rate(0.0), method, opts)?;
    r.value = 1.0 - r.value;
    if let Some(e) = r.mc.as_mut() {
        e.mean = 1.0 - e.mean;
    }
    Ok(r)
}
