//! Link statistics: α-η-μ RF hops, the Málaga FSO hop with pointing error,
//! and the dual-hop combination `γ_o = min(γ_r, γ_d)`.

mod dual;
mod fso;
mod rf;

pub use dual::{dual_hop_cdf, dual_hop_sf};
pub use fso::{
    fso_cdf, fso_cdf_eval, fso_pdf, fso_pdf_eval, fso_sample, fso_sample_generative, Detection,
    FsoChannelParams, FsoGenerativeSampler, FsoInverseSampler,
};
pub use rf::{
    db_to_linear, linear_to_db, rf_cdf, rf_draw, rf_pdf, rf_sample, RfFadingParams, RfSampler,
    RfSeries, RfTerm, ETA_GUARD,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Instantaneous SNR (linear).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrSample(pub f64);

impl SnrSample {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// A counter-based random stream identified by `(seed, stream index)`.
/// Distinct indices give independent, reproducible substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SeedStream {
    pub seed: u64,
    pub stream: u64,
}

impl SeedStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
