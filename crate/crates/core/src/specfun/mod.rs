//! Special functions used by the closed-form secrecy expressions: complex
//! log-gamma, modified Bessel `I`, regularized incomplete gamma, Meijer G,
//! univariate Fox H and the bivariate Fox H.

mod bessel;
mod bivariate;
mod gamma;
mod incgamma;
mod mellin;

pub use bessel::bessel_i;
pub use bivariate::{bivariate_fox_h, BivariateHSpec, JointGroup, JointParam};
pub use gamma::complex_ln_gamma;
pub use incgamma::{lower_inc_gamma_reg, upper_inc_gamma_reg};
pub use mellin::{delta_list, fox_h, meijer_g, Evaluation, GammaParam, GammaTriple, Precision};

pub(crate) use gamma::{gamma_real, ln_gamma_abs};
