//! Closed forms: ASC as weighted sums of the four integrals
//!
//! ```text
//! S1(t) = ∫ γ^{α̃t} e^{−u2 γ^α̃} / (1+γ) dγ
//! S3(t) = ∫ γ^{α̃t} e^{−u2 γ^α̃} / (1+γ) G_m(Fγ/u_r) dγ
//! ```
//!
//! (`S2`, `S4` are the same with `u2 → u2 + q2`), and the outage bound via
//!
//! ```text
//! H1 = ∫ γ^p e^{−κ γ^α̃} dγ,   H2 = ∫ γ^p e^{−κ γ^α̃} G_m(Fθγ/u_r) dγ
//! ```
//!
//! with `κ = u2 θ^α̃ + q2`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::channels::{FsoChannelParams, RfSeries};
use crate::error::{Error, Result};
use crate::quad::integrate_log_axis;
use crate::specfun::{
    bivariate_fox_h, delta_list, fox_h, ln_gamma_abs, meijer_g, BivariateHSpec, Evaluation,
    GammaTriple, JointGroup, JointParam, Precision,
};

use super::{Breakdown, Method, MetricResult, Scenario};

/// Terms whose magnitude bound falls below this are skipped and counted in
/// the error estimate instead.
const NEGLIGIBLE: f64 = 1e-16;
const QUAD_EVALS: usize = 40_000;

/// A term from its closed form and from direct quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TermPair {
    pub closed: Evaluation,
    pub quadrature: Evaluation,
}

/// Series indices of one ASC term; `m` selects the Málaga component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AscIndices {
    pub n1: usize,
    pub t1: usize,
    pub n2: usize,
    pub t2: usize,
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscTerms {
    pub s1: TermPair,
    pub s2: TermPair,
    pub s3: TermPair,
    pub s4: TermPair,
}

/// Series indices of one outage term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SopIndices {
    pub n1: usize,
    pub n2: usize,
    pub t1: usize,
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopTerms {
    pub h1: TermPair,
    pub h2: TermPair,
}

/// `(2π)^{1−α̃} G^{1+α̃, α̃}_{α̃, 1+α̃}[rate | Δ(α̃, −α̃t); 0, Δ(α̃, −α̃t)]`.
pub(crate) fn s1_closed(at: usize, t: usize, rate: f64, prec: &Precision) -> Result<Evaluation> {
    let d = delta_list(at, -((at * t) as f64));
    let mut bm = vec![0.0];
    bm.extend_from_slice(&d);
    let g = meijer_g(&GammaTriple::meijer(&d, &[], &bm, &[]), rate, prec)?;
    let c = (2.0 * std::f64::consts::PI).powi(1 - at as i32);
    Ok(scale_eval(g, c))
}

/// `1/(α̃ rate^M) H[rate^{−1/α̃}, F/(u_r rate^{1/α̃})]` with the joint
/// numerator `Γ(M + s/α̃ + t/α̃)`, `M = t + 1/α̃`.
pub(crate) fn s3_closed(
    at: usize,
    t: usize,
    rate: f64,
    fso: &FsoChannelParams,
    m: u32,
    prec: &Precision,
) -> Result<Evaluation> {
    let a = at as f64;
    let big_m = t as f64 + 1.0 / a;
    let spec = BivariateHSpec {
        outer: JointGroup {
            upper_left: vec![JointParam::new(1.0 - big_m, 1.0 / a, 1.0 / a)],
            ..Default::default()
        },
        inner_x: GammaTriple::meijer(&[0.0], &[], &[0.0], &[]),
        inner_y: fso.cdf_kernel(m),
        x: rate.powf(-1.0 / a),
        y: fso.f_const() / fso.u_r * rate.powf(-1.0 / a),
    };
    let h = bivariate_fox_h(&spec, prec)?;
    Ok(scale_eval(h, (-(a.ln()) - big_m * rate.ln()).exp()))
}

/// `Γ(Z1) / (α̃ κ^{Z1})` with `Z1 = (p + 1)/α̃`.
pub(crate) fn h1_closed(at: f64, p: f64, kappa: f64) -> f64 {
    let z1 = (p + 1.0) / at;
    (ln_gamma_abs(z1).expect("Z1 > 0") - at.ln() - z1 * kappa.ln()).exp()
}

/// Meijer G form of `H2` for integer `α̃`.
pub(crate) fn h2_closed(
    at: usize,
    p: f64,
    kappa: f64,
    theta: f64,
    fso: &FsoChannelParams,
    m: u32,
    prec: &Precision,
) -> Result<Evaluation> {
    let a = at as f64;
    let r = fso.r();
    let l1 = fso.l1();
    let l2 = fso.l2(m);
    let z1 = (p + 1.0) / a;
    let z2 = l2.iter().sum::<f64>() - l1.iter().sum::<f64>() - r as f64;
    let mut an = delta_list(at, 1.0);
    an.push(1.0 - z1);
    let ap: Vec<f64> = l1.iter().flat_map(|&v| delta_list(at, v)).collect();
    let bm: Vec<f64> = l2.iter().flat_map(|&v| delta_list(at, v)).collect();
    let bq = delta_list(at, 0.0);
    let k = fso.f_const() * theta / fso.u_r;
    let arg = (a * k.ln() - kappa.ln() - 2.0 * a * r as f64 * a.ln()).exp();
    let g = meijer_g(&GammaTriple::meijer(&an, &ap, &bm, &bq), arg, prec)?;
    let ln_c = (1.0 - a) * r as f64 * (2.0 * std::f64::consts::PI).ln() + (z2 - 1.0) * a.ln()
        - z1 * kappa.ln();
    Ok(scale_eval(g, ln_c.exp()))
}

/// Fox H form of `H2`, valid for any real `α̃ > 0`.
pub fn h2_fox(
    at: f64,
    p: f64,
    kappa: f64,
    theta: f64,
    fso: &FsoChannelParams,
    m: u32,
    prec: &Precision,
) -> Result<Evaluation> {
    let z1 = (p + 1.0) / at;
    let g = fso.cdf_kernel(m);
    let mut kernel = g.clone();
    kernel
        .upper_left
        .push(crate::specfun::GammaParam::new(1.0 - z1, 1.0 / at));
    let x = fso.f_const() * theta / fso.u_r * kappa.powf(-1.0 / at);
    let h = fox_h(&kernel, x, prec)?;
    Ok(scale_eval(h, (-(at.ln()) - z1 * kappa.ln()).exp()))
}

fn scale_eval(e: Evaluation, c: f64) -> Evaluation {
    Evaluation {
        value: e.value * c,
        error: e.error * c.abs(),
    }
}

fn quad_term(f: impl Fn(f64) -> Result<f64>, centre: f64, prec: &Precision) -> Result<Evaluation> {
    let mut failure = None;
    let (res, _, _) = integrate_log_axis(
        |g| match f(g) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        centre,
        prec.abs_tol * 1e-3,
        prec.rel_tol,
        QUAD_EVALS,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if !res.converged {
        return Err(Error::NonConvergence(format!(
            "term quadrature did not converge ({} evaluations)",
            res.evals
        )));
    }
    Ok(Evaluation {
        value: res.value,
        error: res.error + 64.0 * f64::EPSILON * res.abs_integral,
    })
}

fn check_index(series: &RfSeries, n: usize, t: usize, which: &str) -> Result<()> {
    let term = series.terms.get(n).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "{which} series index {n} beyond the {} retained terms",
            series.terms.len()
        ))
    })?;
    if t as f64 >= term.shape {
        return Err(Error::InvalidParameter(format!(
            "{which} index t = {t} must be below W = {}",
            term.shape
        )));
    }
    Ok(())
}

fn check_m(fso: &FsoChannelParams, m: u32) -> Result<()> {
    if m < 1 || m > fso.beta_d {
        return Err(Error::InvalidParameter(format!(
            "Málaga index m = {m} must lie in 1..={}",
            fso.beta_d
        )));
    }
    Ok(())
}

fn g_cdf(fso: &FsoChannelParams, m: u32, x: f64, prec: &Precision) -> Result<f64> {
    Ok(meijer_g(&fso.cdf_kernel(m), x, prec)?.value)
}

/// `S1..S4` for one index tuple, each by closed form and by quadrature.
pub fn asc_terms(s: &Scenario, idx: AscIndices, prec: &Precision) -> Result<AscTerms> {
    let at = s.closed_form_alpha_tilde()?;
    let a = at as f64;
    let main = s.main_rf.series(prec)?;
    let eve = s.eve_rf.series(prec)?;
    check_index(&main, idx.n1, idx.t1, "main")?;
    check_index(&eve, idx.n2, idx.t2, "eavesdropper")?;
    check_m(&s.fso, idx.m)?;
    let u2 = main.rate;
    let big = main.rate + eve.rate;
    let tt = idx.t1 + idx.t2;
    let k = s.fso.f_const() / s.fso.u_r;
    let fso = &s.fso;
    let m = idx.m;

    let plain = |t: usize, rate: f64| {
        let p = a * t as f64;
        move |g: f64| -> Result<f64> { Ok(g.powf(p) * (-rate * g.powf(a)).exp() / (1.0 + g)) }
    };
    let with_g = |t: usize, rate: f64| {
        let base = plain(t, rate);
        move |g: f64| -> Result<f64> {
            let b = base(g)?;
            if b == 0.0 {
                return Ok(0.0);
            }
            Ok(b * g_cdf(fso, m, k * g, prec)?)
        }
    };
    let centre = |rate: f64| -(rate.ln()) / a;
    Ok(AscTerms {
        s1: TermPair {
            closed: s1_closed(at, idx.t1, u2, prec)?,
            quadrature: quad_term(plain(idx.t1, u2), centre(u2), prec)?,
        },
        s2: TermPair {
            closed: s1_closed(at, tt, big, prec)?,
            quadrature: quad_term(plain(tt, big), centre(big), prec)?,
        },
        s3: TermPair {
            closed: s3_closed(at, idx.t1, u2, fso, m, prec)?,
            quadrature: quad_term(with_g(idx.t1, u2), centre(u2), prec)?,
        },
        s4: TermPair {
            closed: s3_closed(at, tt, big, fso, m, prec)?,
            quadrature: quad_term(with_g(tt, big), centre(big), prec)?,
        },
    })
}

/// `H1, H2` for one index tuple, each by closed form and by quadrature.
pub fn sop_terms(s: &Scenario, idx: SopIndices, prec: &Precision) -> Result<SopTerms> {
    let at = s.closed_form_alpha_tilde()?;
    let a = at as f64;
    let main = s.main_rf.series(prec)?;
    let eve = s.eve_rf.series(prec)?;
    check_index(&main, idx.n1, idx.t1, "main")?;
    if idx.n2 >= eve.terms.len() {
        return Err(Error::InvalidParameter(format!(
            "eavesdropper series index {} beyond the {} retained terms",
            idx.n2,
            eve.terms.len()
        )));
    }
    check_m(&s.fso, idx.m)?;
    let theta = s.theta();
    let kappa = main.rate * theta.powf(a) + eve.rate;
    let p = eve.terms[idx.n2].power + a * idx.t1 as f64;
    let k = s.fso.f_const() * theta / s.fso.u_r;
    let fso = &s.fso;
    let plain = move |g: f64| -> Result<f64> { Ok(g.powf(p) * (-kappa * g.powf(a)).exp()) };
    let with_g = move |g: f64| -> Result<f64> {
        let b = plain(g)?;
        if b == 0.0 {
            return Ok(0.0);
        }
        Ok(b * g_cdf(fso, idx.m, k * g, prec)?)
    };
    let centre = -(kappa.ln()) / a;
    let h1 = h1_closed(a, p, kappa);
    Ok(SopTerms {
        h1: TermPair {
            closed: Evaluation {
                value: h1,
                error: 1e-14 * h1,
            },
            quadrature: quad_term(plain, centre, prec)?,
        },
        h2: TermPair {
            closed: h2_closed(at, p, kappa, theta, fso, idx.m, prec)?,
            quadrature: quad_term(with_g, centre, prec)?,
        },
    })
}

/// `Σ_N c_N(t)` over series terms sharing the same `t`.
fn collapse(coeffs: &[(usize, usize, f64)]) -> Vec<f64> {
    let tmax = coeffs.iter().map(|c| c.1).max().unwrap_or(0);
    let mut out = vec![0.0; tmax + 1];
    for &(_, t, c) in coeffs {
        out[t] += c;
    }
    out
}

fn series_truncation_weight(s: &Scenario) -> f64 {
    let w = s.main_rf.omega.max(s.eve_rf.omega);
    1.0 + (1.0 + 100.0 * w).ln()
}

/// Moment bound `∫ γ^{α̃t} e^{−rate γ^α̃} dγ ≥ S1(t)`.
fn s1_bound(a: f64, t: usize, rate: f64) -> f64 {
    h1_closed(a, a * t as f64, rate)
}

pub(super) fn asc_closed(s: &Scenario, prec: &Precision) -> Result<MetricResult> {
    let at = s.closed_form_alpha_tilde()?;
    let a = at as f64;
    let main = s.main_rf.series(prec)?;
    let eve = s.eve_rf.series(prec)?;
    let u4 = collapse(&main.finite_sum_coeffs()?);
    let q4 = collapse(&eve.finite_sum_coeffs()?);
    let mut pair = vec![0.0; u4.len() + q4.len() - 1];
    for (t1, &c1) in u4.iter().enumerate() {
        for (t2, &c2) in q4.iter().enumerate() {
            pair[t1 + t2] += c1 * c2;
        }
    }
    let weights = s.fso.cdf_weights();
    let u2 = main.rate;
    let big = main.rate + eve.rate;

    // Each job is one weighted term; m = 0 marks the FSO-free S1/S2 part.
    let mut skipped = 0.0;
    let mut jobs: Vec<(bool, usize, f64, u32, f64)> = Vec::new();
    for (second, coeffs, rate) in [(false, &u4, u2), (true, &pair, big)] {
        for (t, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let bound = c.abs() * s1_bound(a, t, rate);
            if bound < NEGLIGIBLE {
                skipped += bound;
                continue;
            }
            jobs.push((second, t, c, 0, 1.0));
            for (&w, m) in weights.iter().zip(1..=s.fso.beta_d) {
                if w != 0.0 {
                    jobs.push((second, t, c, m, w));
                }
            }
        }
    }
    let evals: Vec<Evaluation> = jobs
        .par_iter()
        .map(|&(second, t, _, m, _)| {
            let rate = if second { big } else { u2 };
            if m == 0 {
                s1_closed(at, t, rate, prec)
            } else {
                s3_closed(at, t, rate, &s.fso, m, prec)
            }
        })
        .collect::<Result<_>>()?;
    let mut parts = [0.0; 4];
    let mut error = 0.0;
    for (&(second, _, c, m, w), e) in jobs.iter().zip(&evals) {
        parts[2 * usize::from(m != 0) + usize::from(second)] += c * w * e.value;
        error += (c * w).abs() * e.error;
    }
    let [s1, s2, s3, s4] = parts;
    let value = (s1 - s3) - (s2 - s4);
    let trunc = (main.truncation_bound + eve.truncation_bound) * series_truncation_weight(s);
    let roundoff = 64.0 * f64::EPSILON * (s1.abs() + s2.abs() + s3.abs() + s4.abs());
    Ok(MetricResult::analytic(
        value,
        Method::ClosedForm,
        error + skipped + trunc + roundoff,
        Some(Breakdown::Asc { s1, s2, s3, s4 }),
    ))
}

pub(super) fn sop_closed(s: &Scenario, prec: &Precision) -> Result<MetricResult> {
    let at = s.closed_form_alpha_tilde()?;
    let a = at as f64;
    let main = s.main_rf.series(prec)?;
    let eve = s.eve_rf.series(prec)?;
    let theta = s.theta();
    let kappa = main.rate * theta.powf(a) + eve.rate;
    let u4 = main.finite_sum_coeffs()?;
    // Coefficients grouped by k = 2·N2 + t1, which fixes the exponent p.
    let mut coeff: HashMap<usize, f64> = HashMap::new();
    for &(_, t1, c1) in &u4 {
        for term in &eve.terms {
            let c = c1 * term.coeff() * theta.powf(a * t1 as f64);
            *coeff.entry(2 * term.index + t1).or_insert(0.0) += c;
        }
    }
    let nu = s.eve_rf.mu - 0.5;
    let beta_v = s.eve_rf.beta_const();
    let mut keys: Vec<usize> = coeff.keys().copied().collect();
    keys.sort_unstable();
    let weights = s.fso.cdf_weights();

    let (mut h1_sum, mut h2_sum, mut error, mut skipped) = (0.0, 0.0, 0.0, 0.0);
    for k in keys {
        let c = coeff[&k];
        let p = a * (nu + k as f64) + beta_v - 1.0;
        let h1 = h1_closed(a, p, kappa);
        if (c * h1).abs() < NEGLIGIBLE {
            skipped += (c * h1).abs();
            continue;
        }
        h1_sum += c * h1;
        error += 1e-14 * (c * h1).abs();
        for (w, m) in weights.iter().zip(1..=s.fso.beta_d) {
            if *w == 0.0 {
                continue;
            }
            let e2 = h2_closed(at, p, kappa, theta, &s.fso, m, prec)?;
            h2_sum += c * w * e2.value;
            error += (c * w).abs() * e2.error;
        }
    }
    let value = 1.0 - (h1_sum - h2_sum);
    let trunc = main.truncation_bound + eve.truncation_bound;
    let roundoff = 64.0 * f64::EPSILON * (1.0 + h1_sum.abs() + h2_sum.abs());
    Ok(MetricResult::analytic(
        value,
        Method::ClosedForm,
        error + skipped + trunc + roundoff,
        Some(Breakdown::Sop {
            h1: h1_sum,
            h2: h2_sum,
        }),
    ))
}
