//! Seeded, parallel Monte-Carlo estimation of the secrecy metrics from the
//! channel samplers.
//!
//! Samples are split into a fixed number of batches, each drawing from its
//! own `(seed, batch)` stream. Batches run on a pool of `n_streams` threads
//! and are reduced in batch order, so results are bit-identical for any
//! thread count. Standard errors come from the batch means.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::channels::{FsoGenerativeSampler, RfSampler, SeedStream};
use crate::error::{Error, Result};
use crate::secrecy::Scenario;

/// Number of independent batches a run is split into.
pub const BATCHES: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub n_streams: usize,
    pub confidence: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: 10_000_000,
            seed: 0x5eed,
            n_streams: std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
            confidence: 0.99,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 10_000 {
            return Err(Error::InvalidParameter(format!(
                "n_samples must be at least 10^4, got {}",
                self.n_samples
            )));
        }
        if self.n_streams == 0 {
            return Err(Error::InvalidParameter(
                "n_streams must be at least 1".into(),
            ));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "confidence must lie in (0, 1), got {}",
                self.confidence
            )));
        }
        Ok(())
    }

    /// Two-sided normal quantile for the configured confidence.
    pub fn z(&self) -> f64 {
        Normal::standard().inverse_cdf(0.5 + 0.5 * self.confidence)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub ci_half_width: f64,
    pub n_effective: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McMetrics {
    /// `E[(ln(1+γ_o) − ln(1+γ_v))⁺]`, nats.
    pub asc: McEstimate,
    /// `Pr{1 + γ_o < θ(1 + γ_v)}`.
    pub sop_exact: McEstimate,
    /// `Pr{γ_o < θ γ_v}`.
    pub sop_lower: McEstimate,
    /// `Pr{γ_o > γ_v}`.
    pub pnsc: McEstimate,
}

#[derive(Debug, Clone, Copy, Default)]
struct BatchSums {
    n: u64,
    asc: f64,
    sop_exact: u64,
    sop_lower: u64,
    pnsc: u64,
}

fn batch_sizes(n: u64) -> impl Iterator<Item = (u64, u64)> {
    let base = n / BATCHES;
    let extra = n % BATCHES;
    (0..BATCHES).map(move |b| (b, base + u64::from(b < extra)))
}

/// Ordered thread pool of the requested width.
pub(crate) fn pool(n_streams: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n_streams)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

/// Draw `(γ_r, γ_d, γ_v)` triples and estimate all four metrics on the same
/// samples.
pub fn estimate_metrics(s: &Scenario, cfg: &McConfig) -> Result<McMetrics> {
    s.validate()?;
    cfg.validate()?;
    let main = RfSampler::new(&s.main_rf)?;
    let eve = RfSampler::new(&s.eve_rf)?;
    let fso = FsoGenerativeSampler::new(&s.fso)?;
    let theta = s.theta();

    let run = |(b, n): (u64, u64)| -> BatchSums {
        let mut rng = SeedStream::new(cfg.seed, b).rng();
        let mut acc = BatchSums {
            n,
            ..Default::default()
        };
        for _ in 0..n {
            let gr = main.draw(&mut rng);
            let gd = fso.draw(&mut rng);
            let gv = eve.draw(&mut rng);
            let go = gr.min(gd);
            let gap = go.ln_1p() - gv.ln_1p();
            if gap > 0.0 {
                acc.asc += gap;
            }
            // γ_o < θγ_v + (θ − 1): adding a non-negative constant to the
            // rounded θγ_v keeps the lower-bound event a subset, and the two
            // events coincide exactly at θ = 1.
            let scaled = theta * gv;
            acc.sop_exact += u64::from(go < scaled + (theta - 1.0));
            acc.sop_lower += u64::from(go < scaled);
            acc.pnsc += u64::from(go > gv);
        }
        acc
    };
    let batches: Vec<BatchSums> = pool(cfg.n_streams)?.install(|| {
        batch_sizes(cfg.n_samples)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(run)
            .collect()
    });

    let z = cfg.z();
    let summarize = |get: &dyn Fn(&BatchSums) -> f64| -> McEstimate {
        summarize_batches(&batches, get, cfg.n_samples, z)
    };
    Ok(McMetrics {
        asc: summarize(&|b| b.asc),
        sop_exact: summarize(&|b| b.sop_exact as f64),
        sop_lower: summarize(&|b| b.sop_lower as f64),
        pnsc: summarize(&|b| b.pnsc as f64),
    })
}

fn summarize_batches(
    batches: &[BatchSums],
    get: &dyn Fn(&BatchSums) -> f64,
    n_total: u64,
    z: f64,
) -> McEstimate {
    let total: f64 = batches.iter().map(get).sum();
    let mean = total / n_total as f64;
    let k = batches.len() as f64;
    let ss: f64 = batches
        .iter()
        .map(|b| {
            let d = get(b) / b.n as f64 - mean;
            d * d
        })
        .sum();
    let std_error = (ss / (k - 1.0) / k).sqrt();
    McEstimate {
        mean,
        std_error,
        ci_half_width: z * std_error,
        n_effective: n_total,
    }
}

/// Outcome of [`variance_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleAdvice {
    /// The current run already meets the target.
    Sufficient { current: u64 },
    /// Scale the sample count by `factor` to reach `recommended`.
    Increase { recommended: u64, factor: f64 },
    /// Zero mean: no relative target can be met.
    Unbounded,
}

/// Samples needed so that `std_error / |mean| ≤ target_rel`, from 1/√n
/// scaling of the current run.
pub fn variance_report(e: &McEstimate, target_rel: f64) -> Result<SampleAdvice> {
    if !(target_rel > 0.0) || !target_rel.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "target must be positive, got {target_rel}"
        )));
    }
    if e.mean == 0.0 || !e.mean.is_finite() {
        return Ok(SampleAdvice::Unbounded);
    }
    let rel = e.std_error / e.mean.abs();
    if rel <= target_rel {
        return Ok(SampleAdvice::Sufficient {
            current: e.n_effective,
        });
    }
    let factor = (rel / target_rel).powi(2);
    Ok(SampleAdvice::Increase {
        recommended: (e.n_effective as f64 * factor).ceil() as u64,
        factor,
    })
}
