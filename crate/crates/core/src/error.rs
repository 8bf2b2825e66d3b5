use thiserror::Error;

/// Errors raised across the special-function, channel and metric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("no vertical contour separates the pole families (rightmost left pole {left}, leftmost right pole {right})")]
    ContourInfeasible { left: f64, right: f64 },

    #[error("integration did not converge: {0}")]
    NonConvergence(String),

    #[error("series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
