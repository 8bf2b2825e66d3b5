//! Line-oriented `key=value` scenario files.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::channels::{db_to_linear, Detection, FsoChannelParams, RfFadingParams};
use crate::error::Result;
use crate::secrecy::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// 1-based line number, 0 when the problem is not tied to one line.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            f.write_str(&self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn perr(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfSpec {
    pub alpha: f64,
    pub eta: f64,
    pub mu: f64,
    pub omega_db: f64,
}

impl RfSpec {
    pub fn params(&self) -> Result<RfFadingParams> {
        RfFadingParams::with_omega_db(self.alpha, self.eta, self.mu, self.omega_db)
    }
}

/// How the optical hop's scatter and coherent powers are given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FsoPower {
    Direct {
        g_d: f64,
        omega_cap_d: f64,
    },
    Constituents {
        omega: f64,
        b0: f64,
        rho: f64,
        phase_diff: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsoSpec {
    pub alpha_d: f64,
    pub beta_d: u32,
    pub power: FsoPower,
    pub epsilon: f64,
    pub detection: Detection,
    pub u_r_db: f64,
}

impl FsoSpec {
    pub fn params(&self) -> Result<FsoChannelParams> {
        let u_r = db_to_linear(self.u_r_db);
        match self.power {
            FsoPower::Direct { g_d, omega_cap_d } => FsoChannelParams::new(
                self.alpha_d,
                self.beta_d,
                g_d,
                omega_cap_d,
                self.epsilon,
                self.detection,
                u_r,
            ),
            FsoPower::Constituents {
                omega,
                b0,
                rho,
                phase_diff,
            } => FsoChannelParams::from_constituents(
                self.alpha_d,
                self.beta_d,
                omega,
                b0,
                rho,
                phase_diff,
                self.epsilon,
                self.detection,
                u_r,
            ),
        }
    }
}

/// Parameter a sweep steps through, always in dB.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKey {
    MainOmega,
    EveOmega,
    FsoSnr,
}

impl SweepKey {
    pub fn key(self) -> &'static str {
        match self {
            SweepKey::MainOmega => "rf_main.omega_db",
            SweepKey::EveOmega => "rf_eve.omega_db",
            SweepKey::FsoSnr => "fso.u_r_db",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [SweepKey::MainOmega, SweepKey::EveOmega, SweepKey::FsoSnr]
            .into_iter()
            .find(|k| k.key() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub key: SweepKey,
    pub from_db: f64,
    pub to_db: f64,
    pub points: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from_db];
        }
        let step = (self.to_db - self.from_db) / (self.points - 1) as f64;
        (0..self.points)
            .map(|k| self.from_db + step * k as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub main_rf: RfSpec,
    pub eve_rf: RfSpec,
    pub fso: FsoSpec,
    pub rs_bits: f64,
    pub mc_seed: Option<u64>,
    pub mc_n_samples: Option<u64>,
    pub sweep: Option<Sweep>,
}

const RF_KEYS: [&str; 4] = ["alpha", "eta", "mu", "omega_db"];
const FSO_KEYS: [&str; 11] = [
    "alpha_d",
    "beta_d",
    "g_d",
    "omega_cap_d",
    "omega",
    "b0",
    "rho",
    "phase_diff",
    "epsilon",
    "detection",
    "u_r_db",
];

fn known(key: &str) -> bool {
    if let Some(rest) = key
        .strip_prefix("rf_main.")
        .or_else(|| key.strip_prefix("rf_eve."))
    {
        return RF_KEYS.contains(&rest);
    }
    if let Some(rest) = key.strip_prefix("fso.") {
        return FSO_KEYS.contains(&rest);
    }
    matches!(
        key,
        "rs_bits"
            | "mc.seed"
            | "mc.n_samples"
            | "sweep.key"
            | "sweep.from_db"
            | "sweep.to_db"
            | "sweep.points"
    )
}

struct Entries(BTreeMap<String, (usize, String)>);

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.0.get(key)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> std::result::Result<Option<T>, ParseError> {
        match self.0.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| perr(*line, format!("invalid value '{v}' for key '{key}'"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> std::result::Result<T, ParseError> {
        self.get(key)?
            .ok_or_else(|| perr(0, format!("missing required key '{key}'")))
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> std::result::Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let n = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(perr(n, format!("expected key=value, got '{line}'")));
            };
            let (k, v) = (k.trim(), v.trim());
            if !known(k) {
                return Err(perr(n, format!("unknown key '{k}'")));
            }
            if let Some((first, _)) = map.insert(k.to_string(), (n, v.to_string())) {
                return Err(perr(
                    n,
                    format!("duplicate key '{k}' (first set on line {first})"),
                ));
            }
        }
        let e = Entries(map);

        let rf = |prefix: &str| -> std::result::Result<RfSpec, ParseError> {
            Ok(RfSpec {
                alpha: e.require(&format!("{prefix}.alpha"))?,
                eta: e.require(&format!("{prefix}.eta"))?,
                mu: e.require(&format!("{prefix}.mu"))?,
                omega_db: e.require(&format!("{prefix}.omega_db"))?,
            })
        };
        let main_rf = rf("rf_main")?;
        let eve_rf = rf("rf_eve")?;

        let direct = ["fso.g_d", "fso.omega_cap_d"];
        let quartet = ["fso.omega", "fso.b0", "fso.rho", "fso.phase_diff"];
        let has = |keys: &[&str]| keys.iter().filter(|k| e.raw(k).is_some()).count();
        let power = match (has(&direct), has(&quartet)) {
            (2, 0) => FsoPower::Direct {
                g_d: e.require("fso.g_d")?,
                omega_cap_d: e.require("fso.omega_cap_d")?,
            },
            (0, 4) => FsoPower::Constituents {
                omega: e.require("fso.omega")?,
                b0: e.require("fso.b0")?,
                rho: e.require("fso.rho")?,
                phase_diff: e.require("fso.phase_diff")?,
            },
            (d, q) if d > 0 && q > 0 => {
                let line = quartet.iter().chain(&direct).filter_map(|k| e.raw(k)).map(|r| r.0).max();
                return Err(perr(
                    line.unwrap_or(0),
                    "give either fso.g_d and fso.omega_cap_d or the constituents fso.omega, fso.b0, fso.rho, fso.phase_diff, not both",
                ));
            }
            _ => {
                return Err(perr(
                    0,
                    "fso powers incomplete: need fso.g_d and fso.omega_cap_d, or fso.omega, fso.b0, fso.rho and fso.phase_diff",
                ))
            }
        };
        let detection = {
            let (line, v) = e
                .raw("fso.detection")
                .ok_or_else(|| perr(0, "missing required key 'fso.detection'"))?;
            Detection::parse(v).ok_or_else(|| {
                perr(
                    *line,
                    format!("invalid value '{v}' for key 'fso.detection' (expected hd or imdd)"),
                )
            })?
        };
        let fso = FsoSpec {
            alpha_d: e.require("fso.alpha_d")?,
            beta_d: e.require("fso.beta_d")?,
            power,
            epsilon: e.require("fso.epsilon")?,
            detection,
            u_r_db: e.require("fso.u_r_db")?,
        };

        let sweep = match e.raw("sweep.key") {
            None => {
                for k in ["sweep.from_db", "sweep.to_db", "sweep.points"] {
                    if let Some((line, _)) = e.raw(k) {
                        return Err(perr(*line, format!("'{k}' given without sweep.key")));
                    }
                }
                None
            }
            Some((line, v)) => {
                let key = SweepKey::parse(v).ok_or_else(|| {
                    perr(
                        *line,
                        format!(
                            "invalid sweep.key '{v}' (expected rf_main.omega_db, rf_eve.omega_db or fso.u_r_db)"
                        ),
                    )
                })?;
                let points: usize = e.require("sweep.points")?;
                if points == 0 {
                    return Err(perr(
                        e.raw("sweep.points").map_or(0, |r| r.0),
                        "sweep.points must be at least 1",
                    ));
                }
                Some(Sweep {
                    key,
                    from_db: e.require("sweep.from_db")?,
                    to_db: e.require("sweep.to_db")?,
                    points,
                })
            }
        };

        Ok(Self {
            main_rf,
            eve_rf,
            fso,
            rs_bits: e.get("rs_bits")?.unwrap_or(0.0),
            mc_seed: e.get("mc.seed")?,
            mc_n_samples: e.get("mc.n_samples")?,
            sweep,
        })
    }

    /// Sweep values in dB, or `[None]` for a single point.
    pub fn points(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(s) => s.values().into_iter().map(Some).collect(),
            None => vec![None],
        }
    }

    /// The scenario with the sweep parameter set to `value_db`.
    pub fn scenario_at(&self, value_db: Option<f64>) -> Result<Scenario> {
        let mut main_rf = self.main_rf;
        let mut eve_rf = self.eve_rf;
        let mut fso = self.fso;
        if let (Some(v), Some(s)) = (value_db, &self.sweep) {
            match s.key {
                SweepKey::MainOmega => main_rf.omega_db = v,
                SweepKey::EveOmega => eve_rf.omega_db = v,
                SweepKey::FsoSnr => fso.u_r_db = v,
            }
        }
        Scenario::new(
            main_rf.params()?,
            eve_rf.params()?,
            fso.params()?,
            self.rs_bits,
        )
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (prefix, rf) in [("rf_main", &self.main_rf), ("rf_eve", &self.eve_rf)] {
            let _ = writeln!(out, "{prefix}.alpha = {}", rf.alpha);
            let _ = writeln!(out, "{prefix}.eta = {}", rf.eta);
            let _ = writeln!(out, "{prefix}.mu = {}", rf.mu);
            let _ = writeln!(out, "{prefix}.omega_db = {}", rf.omega_db);
        }
        let f = &self.fso;
        let _ = writeln!(out, "fso.alpha_d = {}", f.alpha_d);
        let _ = writeln!(out, "fso.beta_d = {}", f.beta_d);
        match f.power {
            FsoPower::Direct { g_d, omega_cap_d } => {
                let _ = writeln!(out, "fso.g_d = {g_d}");
                let _ = writeln!(out, "fso.omega_cap_d = {omega_cap_d}");
            }
            FsoPower::Constituents {
                omega,
                b0,
                rho,
                phase_diff,
            } => {
                let _ = writeln!(out, "fso.omega = {omega}");
                let _ = writeln!(out, "fso.b0 = {b0}");
                let _ = writeln!(out, "fso.rho = {rho}");
                let _ = writeln!(out, "fso.phase_diff = {phase_diff}");
            }
        }
        let _ = writeln!(out, "fso.epsilon = {}", f.epsilon);
        let _ = writeln!(out, "fso.detection = {}", f.detection.name());
        let _ = writeln!(out, "fso.u_r_db = {}", f.u_r_db);
        let _ = writeln!(out, "rs_bits = {}", self.rs_bits);
        if let Some(seed) = self.mc_seed {
            let _ = writeln!(out, "mc.seed = {seed}");
        }
        if let Some(n) = self.mc_n_samples {
            let _ = writeln!(out, "mc.n_samples = {n}");
        }
        if let Some(s) = &self.sweep {
            let _ = writeln!(out, "sweep.key = {}", s.key.key());
            let _ = writeln!(out, "sweep.from_db = {}", s.from_db);
            let _ = writeln!(out, "sweep.to_db = {}", s.to_db);
            let _ = writeln!(out, "sweep.points = {}", s.points);
        }
        out
    }
}
