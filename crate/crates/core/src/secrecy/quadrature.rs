//! Metrics by adaptive quadrature of their defining integrals on a
//! logarithmic axis.

use std::cell::{Cell, RefCell};

use crate::channels::fso_cdf_eval;
use crate::error::{Error, Result};
use crate::quad::integrate_log_axis;
use crate::specfun::Precision;

use super::{Method, MetricResult, Scenario};

const MAX_EVALS: usize = 40_000;

/// Records the first failure inside a quadrature closure and the largest
/// absolute error of the FSO CDF values used.
struct Tracker {
    failure: RefCell<Option<Error>>,
    worst_cdf_error: Cell<f64>,
}

impl Tracker {
    fn new() -> Self {
        Self {
            failure: RefCell::new(None),
            worst_cdf_error: Cell::new(0.0),
        }
    }

    fn fso_cdf(&self, s: &Scenario, gamma: f64, prec: &Precision) -> f64 {
        match fso_cdf_eval(&s.fso, gamma, prec) {
            Ok(e) => {
                self.worst_cdf_error
                    .set(self.worst_cdf_error.get().max(e.error));
                e.value.clamp(0.0, 1.0)
            }
            Err(e) => {
                self.failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish(self) -> Result<f64> {
        match self.failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(self.worst_cdf_error.get()),
        }
    }
}

fn not_converged(what: &str, value: f64, error: f64, evals: usize) -> Error {
    Error::NonConvergence(format!(
        "{what} quadrature did not converge after {evals} evaluations (value {value:e}, error {error:e})"
    ))
}

/// `∫ F_v(γ) (1 − F_o(γ)) / (1 + γ) dγ`.
pub(super) fn asc_quadrature(s: &Scenario, prec: &Precision) -> Result<MetricResult> {
    let main = s.main_rf.series(prec)?;
    let eve = s.eve_rf.series(prec)?;
    let tracker = Tracker::new();
    let f = |g: f64| -> f64 {
        let weight = eve.cdf(g) * main.sf(g) / (1.0 + g);
        if weight < 1e-300 {
            return 0.0;
        }
        weight * (1.0 - tracker.fso_cdf(s, g, prec))
    };
    let centre = s.main_rf.omega.min(s.fso.u_r).max(s.eve_rf.omega).ln();
    let (res, _, _) = integrate_log_axis(f, centre, prec.abs_tol, prec.rel_tol, MAX_EVALS);
    let cdf_err = tracker.finish()?;
    if !res.converged {
        return Err(not_converged("ASC", res.value, res.error, res.evals));
    }
    // Error of the FSO values, carried by the RF-only weight integral.
    let (rf_only, _, _) = integrate_log_axis(
        |g| eve.cdf(g) * main.sf(g) / (1.0 + g),
        centre,
        prec.abs_tol,
        1e-3,
        MAX_EVALS,
    );
    let trunc = (main.truncation_bound + eve.truncation_bound) * rf_only.value;
    let error =
        res.error + cdf_err * rf_only.value + trunc + 64.0 * f64::EPSILON * res.abs_integral;
    Ok(MetricResult::analytic(
        res.value,
        Method::Quadrature,
        error,
        None,
    ))
}

/// `∫ F_o(θγ) f_v(γ) dγ`.
pub(super) fn sop_quadrature(s: &Scenario, prec: &Precision) -> Result<MetricResult> {
    let main = s.main_rf.series(prec)?;
    let eve = s.eve_rf.series(prec)?;
    let theta = s.theta();
    let tracker = Tracker::new();
    let f = |g: f64| -> f64 {
        let dens = eve.pdf(g);
        if dens < 1e-300 {
            return 0.0;
        }
        let x = theta * g;
        let fr = main.cdf(x);
        let fd = tracker.fso_cdf(s, x, prec);
        dens * (fr + fd - fr * fd)
    };
    let centre = s.eve_rf.omega.ln();
    let (res, _, _) = integrate_log_axis(f, centre, prec.abs_tol, prec.rel_tol, MAX_EVALS);
    let cdf_err = tracker.finish()?;
    if !res.converged {
        return Err(not_converged("SOP", res.value, res.error, res.evals));
    }
    let trunc = main.truncation_bound + eve.truncation_bound;
    let error = res.error + cdf_err + trunc + 64.0 * f64::EPSILON * res.abs_integral;
    Ok(MetricResult::analytic(
        res.value,
        Method::Quadrature,
        error,
        None,
    ))
}
