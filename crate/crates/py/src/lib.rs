//! Python module `rffso`: channel models, the three metric routes and the
//! scenario-file CLI front end.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use rffso_secrecy::channels::{
    db_to_linear, fso_cdf, fso_pdf, fso_sample, rf_cdf, rf_pdf, rf_sample, Detection,
    FsoChannelParams, RfFadingParams, SeedStream,
};
use rffso_secrecy::cli::{evaluate, find_preset, write_csv, RunPlan, ScenarioFile};
use rffso_secrecy::montecarlo::{estimate_metrics, McConfig, McEstimate};
use rffso_secrecy::secrecy::{self, EvalOptions, Method, MetricResult};
use rffso_secrecy::specfun::Precision;
use rffso_secrecy::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidParameter(_) | Error::Domain(_) | Error::Precondition(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn method(name: &str) -> PyResult<Method> {
    Method::parse(name).ok_or_else(|| PyValueError::new_err(format!("unknown method '{name}'")))
}

/// α-η-μ RF link. `omega` is linear unless given as `omega_db`.
#[pyclass(frozen, skip_from_py_object, name = "RfFading")]
#[derive(Clone, Copy)]
struct PyRf(RfFadingParams);

#[pymethods]
impl PyRf {
    #[new]
    #[pyo3(signature = (alpha, eta, mu, omega=None, omega_db=None))]
    fn new(
        alpha: f64,
        eta: f64,
        mu: f64,
        omega: Option<f64>,
        omega_db: Option<f64>,
    ) -> PyResult<Self> {
        let omega = match (omega, omega_db) {
            (Some(w), None) => w,
            (None, Some(db)) => db_to_linear(db),
            _ => return Err(PyValueError::new_err("give exactly one of omega, omega_db")),
        };
        RfFadingParams::new(alpha, eta, mu, omega)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn omega(&self) -> f64 {
        self.0.omega
    }

    fn pdf(&self, gamma: f64) -> PyResult<f64> {
        rf_pdf(&self.0, gamma, &Precision::default()).map_err(py_err)
    }

    fn cdf(&self, gamma: f64) -> PyResult<f64> {
        rf_cdf(&self.0, gamma, &Precision::default()).map_err(py_err)
    }

    #[pyo3(signature = (n, seed, stream=0))]
    fn sample(&self, n: usize, seed: u64, stream: u64) -> PyResult<Vec<f64>> {
        let v = rf_sample(&self.0, SeedStream::new(seed, stream), n).map_err(py_err)?;
        Ok(v.into_iter().map(|s| s.0).collect())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Málaga FSO link with pointing error; `detection` is "hd" or "imdd".
#[pyclass(frozen, skip_from_py_object, name = "FsoLink")]
#[derive(Clone, Copy)]
struct PyFso(FsoChannelParams);

#[pymethods]
impl PyFso {
    #[new]
    #[pyo3(signature = (alpha_d, beta_d, g_d, omega_cap_d, epsilon, detection, u_r=None, u_r_db=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        alpha_d: f64,
        beta_d: u32,
        g_d: f64,
        omega_cap_d: f64,
        epsilon: f64,
        detection: &str,
        u_r: Option<f64>,
        u_r_db: Option<f64>,
    ) -> PyResult<Self> {
        let det = Detection::parse(detection)
            .ok_or_else(|| PyValueError::new_err(format!("unknown detection '{detection}'")))?;
        let u_r = match (u_r, u_r_db) {
            (Some(u), None) => u,
            (None, Some(db)) => db_to_linear(db),
            _ => return Err(PyValueError::new_err("give exactly one of u_r, u_r_db")),
        };
        FsoChannelParams::new(alpha_d, beta_d, g_d, omega_cap_d, epsilon, det, u_r)
            .map(Self)
            .map_err(py_err)
    }

    fn pdf(&self, gamma: f64) -> PyResult<f64> {
        fso_pdf(&self.0, gamma, &Precision::default()).map_err(py_err)
    }

    fn cdf(&self, gamma: f64) -> PyResult<f64> {
        fso_cdf(&self.0, gamma, &Precision::default()).map_err(py_err)
    }

    #[pyo3(signature = (n, seed, stream=0))]
    fn sample(&self, n: usize, seed: u64, stream: u64) -> PyResult<Vec<f64>> {
        let v = fso_sample(
            &self.0,
            SeedStream::new(seed, stream),
            n,
            &Precision::default(),
        )
        .map_err(py_err)?;
        Ok(v.into_iter().map(|s| s.0).collect())
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

/// Main RF link, eavesdropper RF link, FSO hop and target rate in bits.
#[pyclass(frozen, skip_from_py_object, name = "Scenario")]
#[derive(Clone, Copy)]
struct PyScenario(secrecy::Scenario);

#[pymethods]
impl PyScenario {
    #[new]
    #[pyo3(signature = (main, eve, fso, rate_rs=0.0))]
    fn new(
        main: PyRef<'_, PyRf>,
        eve: PyRef<'_, PyRf>,
        fso: PyRef<'_, PyFso>,
        rate_rs: f64,
    ) -> PyResult<Self> {
        secrecy::Scenario::new(main.0, eve.0, fso.0, rate_rs)
            .map(Self)
            .map_err(py_err)
    }

    #[getter]
    fn theta(&self) -> f64 {
        self.0.theta()
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn options(samples: u64, seed: u64) -> EvalOptions {
    EvalOptions {
        mc: McConfig {
            n_samples: samples,
            seed,
            ..McConfig::default()
        },
        ..EvalOptions::default()
    }
}

type Route = fn(&secrecy::Scenario, Method, &EvalOptions) -> rffso_secrecy::Result<MetricResult>;

fn metric(route: Route, s: &PyScenario, m: &str, samples: u64, seed: u64) -> PyResult<(f64, f64)> {
    let r = route(&s.0, method(m)?, &options(samples, seed)).map_err(py_err)?;
    Ok((r.value, r.error_estimate))
}

/// Average secrecy capacity in nats as `(value, error estimate)`.
#[pyfunction]
#[pyo3(signature = (scenario, method="quadrature", samples=10_000_000, seed=0x5eed))]
fn asc(
    scenario: PyRef<'_, PyScenario>,
    method: &str,
    samples: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    metric(secrecy::asc, &scenario, method, samples, seed)
}

/// Secrecy-outage lower bound as `(value, error estimate)`.
#[pyfunction]
#[pyo3(signature = (scenario, method="quadrature", samples=10_000_000, seed=0x5eed))]
fn sop_lower(
    scenario: PyRef<'_, PyScenario>,
    method: &str,
    samples: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    metric(secrecy::sop_lower, &scenario, method, samples, seed)
}

/// Probability of non-zero secrecy capacity as `(value, error estimate)`.
#[pyfunction]
#[pyo3(signature = (scenario, method="quadrature", samples=10_000_000, seed=0x5eed))]
fn pnsc(
    scenario: PyRef<'_, PyScenario>,
    method: &str,
    samples: u64,
    seed: u64,
) -> PyResult<(f64, f64)> {
    metric(secrecy::pnsc, &scenario, method, samples, seed)
}

fn estimate_dict<'py>(py: Python<'py>, e: &McEstimate) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("mean", e.mean)?;
    d.set_item("std_error", e.std_error)?;
    d.set_item("ci_half_width", e.ci_half_width)?;
    d.set_item("n_effective", e.n_effective)?;
    Ok(d)
}

/// All four Monte-Carlo estimates from one run, keyed by metric name.
#[pyfunction]
#[pyo3(signature = (scenario, samples=1_000_000, seed=0x5eed, n_streams=None))]
fn monte_carlo<'py>(
    py: Python<'py>,
    scenario: PyRef<'_, PyScenario>,
    samples: u64,
    seed: u64,
    n_streams: Option<usize>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = options(samples, seed).mc;
    if let Some(k) = n_streams {
        cfg.n_streams = k;
    }
    let s = scenario.0;
    let m = py.detach(|| estimate_metrics(&s, &cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("asc", estimate_dict(py, &m.asc)?)?;
    d.set_item("sop_exact", estimate_dict(py, &m.sop_exact)?)?;
    d.set_item("sop_lower", estimate_dict(py, &m.sop_lower)?)?;
    d.set_item("pnsc", estimate_dict(py, &m.pnsc)?)?;
    Ok(d)
}

/// Scenario-file text of a named preset.
#[pyfunction]
fn preset(name: &str) -> PyResult<String> {
    find_preset(name)
        .map(|p| p.text())
        .ok_or_else(|| PyValueError::new_err(format!("unknown preset '{name}'")))
}

/// Evaluate a scenario file and return the CSV report.
#[pyfunction]
#[pyo3(signature = (text, metrics=vec!["asc".to_string(), "sop".to_string(), "pnsc".to_string()], methods=vec!["quadrature".to_string()]))]
fn run(text: &str, metrics: Vec<String>, methods: Vec<String>) -> PyResult<String> {
    let file = ScenarioFile::parse(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let metrics = metrics
        .iter()
        .map(|m| {
            rffso_secrecy::cli::Metric::parse(m)
                .ok_or_else(|| PyValueError::new_err(format!("unknown metric '{m}'")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let methods = methods
        .iter()
        .map(|m| method(m))
        .collect::<PyResult<Vec<_>>>()?;
    let plan = RunPlan {
        metrics,
        methods,
        opts: EvalOptions::default(),
        bits: false,
        seed: None,
        samples: None,
    };
    let rows = evaluate(&file, &plan).map_err(py_err)?;
    Ok(write_csv(&rows))
}

#[pymodule]
fn rffso(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRf>()?;
    m.add_class::<PyFso>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(asc, m)?)?;
    m.add_function(wrap_pyfunction!(sop_lower, m)?)?;
    m.add_function(wrap_pyfunction!(pnsc, m)?)?;
    m.add_function(wrap_pyfunction!(monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(preset, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
