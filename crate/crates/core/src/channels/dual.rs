//! End-to-end SNR of the variable-gain relay, `γ_o ≈ min(γ_r, γ_d)`.

use crate::error::Result;
use crate::specfun::Precision;

use super::{fso_cdf, FsoChannelParams, RfFadingParams};

/// `F_o = F_r + F_d − F_r F_d`.
pub fn dual_hop_cdf(
    pr: &RfFadingParams,
    pd: &FsoChannelParams,
    gamma: f64,
    prec: &Precision,
) -> Result<f64> {
    let fr = super::rf_cdf(pr, gamma, prec)?;
    let fd = fso_cdf(pd, gamma, prec)?;
    Ok(combine(fr, fd))
}

/// `1 − F_o = (1 − F_r)(1 − F_d)`.
pub fn dual_hop_sf(
    pr: &RfFadingParams,
    pd: &FsoChannelParams,
    gamma: f64,
    prec: &Precision,
) -> Result<f64> {
    Ok(1.0 - dual_hop_cdf(pr, pd, gamma, prec)?)
}

pub(crate) fn combine(fr: f64, fd: f64) -> f64 {
    (fr + fd - fr * fd).clamp(0.0, 1.0)
}
