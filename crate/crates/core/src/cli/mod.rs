//! Command-line front end: `run`, `preset` and `reproduce-figure`.
//!
//! Exit codes: 0 success, 2 unusable input (arguments, scenario file,
//! parameter values), 3 numeric failure or unmet precondition, 4 route
//! disagreement under `--strict`.

pub mod figures;
pub mod report;
pub mod scenario_file;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::montecarlo::McConfig;
use crate::secrecy::{EvalOptions, Method};

pub use figures::{figure, find_preset, preset_names, Curve, Preset, PRESETS};
pub use report::{evaluate, write_csv, ResultRow, RunPlan, HEADER};
pub use scenario_file::{ParseError, ScenarioFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_DISAGREE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Metric {
    Asc,
    Sop,
    Pnsc,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Asc => "asc",
            Metric::Sop => "sop",
            Metric::Pnsc => "pnsc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Metric::Asc, Metric::Sop, Metric::Pnsc]
            .into_iter()
            .find(|m| m.name() == s.trim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    #[value(name = "closed_form", alias = "closed-form", alias = "closed")]
    ClosedForm,
    #[value(alias = "quad")]
    Quadrature,
    #[value(name = "mc", alias = "monte_carlo", alias = "monte-carlo")]
    MonteCarlo,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Quadrature => Method::Quadrature,
            MethodArg::MonteCarlo => Method::MonteCarlo,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rffso",
    version,
    about = "Secrecy metrics (ASC, SOP lower bound, PNSC) of dual-hop RF-FSO links"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct RouteArgs {
    /// Evaluation routes, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [MethodArg::Quadrature, MethodArg::MonteCarlo])]
    pub methods: Vec<MethodArg>,
    /// Monte-Carlo seed (overrides mc.seed).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte-Carlo sample count (overrides mc.n_samples).
    #[arg(long)]
    pub samples: Option<u64>,
    /// Report ASC in bits/s/Hz instead of nats/s/Hz.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a scenario file and print CSV rows to standard output.
    Run {
        file: PathBuf,
        /// Metrics, comma separated.
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Metric::Asc, Metric::Sop, Metric::Pnsc])]
        metrics: Vec<Metric>,
        #[command(flatten)]
        routes: RouteArgs,
        /// Exit with status 4 if any row's routes disagree.
        #[arg(long)]
        strict: bool,
    },
    /// Print the scenario file for a named special case.
    Preset { name: String },
    /// Write one CSV per curve of a figure (2 to 13).
    ReproduceFigure {
        id: u32,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        routes: RouteArgs,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) => EXIT_INPUT,
        _ => EXIT_NUMERIC,
    }
}

fn plan(metrics: Vec<Metric>, routes: &RouteArgs) -> RunPlan {
    let mut methods: Vec<Method> = Vec::new();
    for m in &routes.methods {
        let m = Method::from(*m);
        if !methods.contains(&m) {
            methods.push(m);
        }
    }
    RunPlan {
        metrics,
        methods,
        opts: EvalOptions {
            mc: McConfig::default(),
            ..EvalOptions::default()
        },
        bits: routes.bits,
        seed: routes.seed,
        samples: routes.samples,
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match cli.command {
        Command::Run {
            file,
            metrics,
            routes,
            strict,
        } => cmd_run(&file, metrics, &routes, strict, out, err),
        Command::Preset { name } => match find_preset(&name) {
            Some(p) => {
                let _ = out.write_all(p.text().as_bytes());
                EXIT_OK
            }
            None => {
                let _ = writeln!(
                    err,
                    "error: unknown preset '{name}'; valid presets: {}",
                    preset_names().join(", ")
                );
                EXIT_INPUT
            }
        },
        Command::ReproduceFigure {
            id,
            out_dir,
            routes,
        } => cmd_figure(id, &out_dir, &routes, out, err),
    }
}

fn cmd_run(
    path: &Path,
    metrics: Vec<Metric>,
    routes: &RouteArgs,
    strict: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    let file = match ScenarioFile::parse(&text) {
        Ok(f) => f,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            return EXIT_INPUT;
        }
    };
    if let Err(e) = report::scenarios(&file) {
        let _ = writeln!(err, "error: {}: {e}", path.display());
        return exit_code(&e);
    }
    let rows = match evaluate(&file, &plan(metrics, routes)) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = out.write_all(write_csv(&rows).as_bytes());
    let bad = rows.iter().filter(|r| !r.agreement).count();
    if bad > 0 {
        let _ = writeln!(err, "warning: {bad} row(s) where the routes disagree");
        if strict {
            return EXIT_DISAGREE;
        }
    }
    EXIT_OK
}

fn cmd_figure(
    id: u32,
    out_dir: &Path,
    routes: &RouteArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let curves = match figure(id) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_INPUT;
        }
    };
    if let Err(e) = std::fs::create_dir_all(out_dir) {
        let _ = writeln!(err, "error: cannot create {}: {e}", out_dir.display());
        return EXIT_INPUT;
    }
    for c in curves {
        let rows = match evaluate(&c.file, &plan(vec![c.metric], routes)) {
            Ok(r) => r,
            Err(e) => {
                let _ = writeln!(err, "error: figure {id}, curve {}: {e}", c.label);
                return exit_code(&e);
            }
        };
        let path = out_dir.join(format!("fig{id}_{}.csv", c.label));
        if let Err(e) = std::fs::write(&path, write_csv(&rows)) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_INPUT;
        }
        let _ = writeln!(out, "{}", path.display());
    }
    EXIT_OK
}
