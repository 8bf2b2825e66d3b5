//! Sweep evaluation and CSV rows.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::scenario_file::ScenarioFile;
use super::Metric;
use crate::error::Result;
use crate::montecarlo::{estimate_metrics, McConfig, McEstimate};
use crate::secrecy::{asc, pnsc, sop_lower, EvalOptions, Method, MetricResult, Scenario};

pub const HEADER: &str =
    "sweep_value_db,metric,value_closed,err_closed,value_quad,err_quad,value_mc,mc_ci,agreement_flag";

/// Width of the Monte-Carlo band used in agreement checks, in standard errors.
pub const MC_SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub sweep_value_db: Option<f64>,
    pub metric: Metric,
    pub closed: Option<(f64, f64)>,
    pub quad: Option<(f64, f64)>,
    pub mc: Option<McEstimate>,
    pub agreement: bool,
}

fn cell(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x != 0.0 && !(1e-4..1e15).contains(&x.abs()) => format!("{x:e}"),
        Some(x) => x.to_string(),
    }
}

impl ResultRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            cell(self.sweep_value_db),
            self.metric.name(),
            cell(self.closed.map(|c| c.0)),
            cell(self.closed.map(|c| c.1)),
            cell(self.quad.map(|c| c.0)),
            cell(self.quad.map(|c| c.1)),
            cell(self.mc.map(|m| m.mean)),
            cell(self.mc.map(|m| m.ci_half_width)),
            self.agreement
        )
    }

    /// Every pair of available routes lies within the sum of their error
    /// bounds; the Monte-Carlo bound is [`MC_SIGMAS`] standard errors.
    pub fn routes_agree(&self) -> bool {
        let mut pts: Vec<(f64, f64)> = Vec::new();
        pts.extend(self.closed);
        pts.extend(self.quad);
        pts.extend(self.mc.map(|m| (m.mean, MC_SIGMAS * m.std_error)));
        pts.iter()
            .enumerate()
            .all(|(i, a)| pts[i + 1..].iter().all(|b| (a.0 - b.0).abs() <= a.1 + b.1))
    }
}

pub fn write_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv());
    }
    out
}

/// What to compute for each sweep point.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub metrics: Vec<Metric>,
    pub methods: Vec<Method>,
    pub opts: EvalOptions,
    /// Report ASC in bits rather than nats.
    pub bits: bool,
    /// Command-line overrides; they win over `mc.*` keys in the file.
    pub seed: Option<u64>,
    pub samples: Option<u64>,
}

fn analytic(
    s: &Scenario,
    metric: Metric,
    method: Method,
    opts: &EvalOptions,
) -> Result<MetricResult> {
    match metric {
        Metric::Asc => asc(s, method, opts),
        Metric::Sop => sop_lower(s, method, opts),
        Metric::Pnsc => pnsc(s, method, opts),
    }
}

fn point_rows(
    s: &Scenario,
    x: Option<f64>,
    plan: &RunPlan,
    mc: &McConfig,
) -> Result<Vec<ResultRow>> {
    let mc_run = if plan.methods.contains(&Method::MonteCarlo) {
        Some(estimate_metrics(s, mc)?)
    } else {
        None
    };
    let opts = EvalOptions {
        mc: *mc,
        ..plan.opts
    };
    let mut rows = Vec::new();
    for &metric in &plan.metrics {
        let scale = if plan.bits && metric == Metric::Asc {
            1.0 / std::f64::consts::LN_2
        } else {
            1.0
        };
        let route = |m: Method| -> Result<Option<(f64, f64)>> {
            if !plan.methods.contains(&m) {
                return Ok(None);
            }
            let r = analytic(s, metric, m, &opts)?;
            Ok(Some((r.value * scale, r.error_estimate * scale)))
        };
        let closed = route(Method::ClosedForm)?;
        let quad = route(Method::Quadrature)?;
        let mc_est = mc_run.map(|run| {
            let e = match metric {
                Metric::Asc => run.asc,
                Metric::Sop => run.sop_lower,
                Metric::Pnsc => run.pnsc,
            };
            McEstimate {
                mean: e.mean * scale,
                std_error: e.std_error * scale,
                ci_half_width: e.ci_half_width * scale,
                ..e
            }
        });
        let mut row = ResultRow {
            sweep_value_db: x,
            metric,
            closed,
            quad,
            mc: mc_est,
            agreement: true,
        };
        row.agreement = row.routes_agree();
        rows.push(row);
    }
    Ok(rows)
}

/// All scenarios of a file, in sweep order. Fails on the first invalid one.
pub fn scenarios(file: &ScenarioFile) -> Result<Vec<(Option<f64>, Scenario)>> {
    file.points()
        .into_iter()
        .map(|x| Ok((x, file.scenario_at(x)?)))
        .collect()
}

/// Evaluate every sweep point (concurrently) and return rows in sweep order.
pub fn evaluate(file: &ScenarioFile, plan: &RunPlan) -> Result<Vec<ResultRow>> {
    let points = scenarios(file)?;
    let mut mc = plan.opts.mc;
    if let Some(seed) = plan.seed.or(file.mc_seed) {
        mc.seed = seed;
    }
    if let Some(n) = plan.samples.or(file.mc_n_samples) {
        mc.n_samples = n;
    }
    let per_point: Vec<Vec<ResultRow>> = points
        .par_iter()
        .map(|(x, s)| point_rows(s, *x, plan, &mc))
        .collect::<Result<_>>()?;
    Ok(per_point.into_iter().flatten().collect())
}
