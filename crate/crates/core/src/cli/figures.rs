//! Named special-case presets and the curve sets behind `reproduce-figure` ids 2–13.
//!
//! Captions that leave a parameter open fall back to the common baseline:
//! ε = 6.7, (α_d, β_d) = (2.296, 2), heterodyne detection, u_r = 10 dB.

use super::scenario_file::{FsoPower, FsoSpec, RfSpec, ScenarioFile, Sweep, SweepKey};
use super::Metric;
use crate::channels::Detection;

/// Stand-in for η = 1, where the α-η-μ series is singular.
pub const ETA_NEAR_ONE: f64 = 1.0001;
/// Stand-in for g_d = 0 in the special-case presets.
pub const G_D_GUARD: f64 = 1e-4;

pub const TURBULENCE: [(&str, f64, u32); 3] =
    [("strong", 2.296, 2), ("moderate", 4.2, 3), ("weak", 8.0, 4)];

const DETECTIONS: [Detection; 2] = [Detection::Heterodyne, Detection::IntensityModulation];

fn rf(alpha: f64, mu: f64, omega_db: f64) -> RfSpec {
    RfSpec {
        alpha,
        eta: ETA_NEAR_ONE,
        mu,
        omega_db,
    }
}

/// Common caption set: α = 4, μ = 1 on both RF links, Ω_d = g_d = 2.
pub fn baseline() -> ScenarioFile {
    ScenarioFile {
        main_rf: rf(4.0, 1.0, 10.0),
        eve_rf: rf(4.0, 1.0, 0.0),
        fso: FsoSpec {
            alpha_d: 2.296,
            beta_d: 2,
            power: FsoPower::Direct {
                g_d: 2.0,
                omega_cap_d: 2.0,
            },
            epsilon: 6.7,
            detection: Detection::Heterodyne,
            u_r_db: 10.0,
        },
        rs_bits: 0.0,
        mc_seed: None,
        mc_n_samples: None,
        sweep: None,
    }
}

fn sweep(key: SweepKey) -> Option<Sweep> {
    Some(Sweep {
        key,
        from_db: 0.0,
        to_db: 40.0,
        points: 9,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub title: &'static str,
    pub alpha: f64,
    pub mu: f64,
    pub g_d: f64,
    pub omega_cap_d: f64,
    pub rho: f64,
}

pub const PRESETS: [Preset; 5] = [
    Preset {
        name: "alpha-mu-malaga",
        title: "(alpha-mu)-Malaga",
        alpha: 4.0,
        mu: 1.0,
        g_d: 2.0,
        omega_cap_d: 1.0,
        rho: 0.0,
    },
    Preset {
        name: "eta-mu-malaga",
        title: "(eta-mu)-Malaga",
        alpha: 6.0,
        mu: 3.0,
        g_d: 2.0,
        omega_cap_d: 4.0,
        rho: 0.0,
    },
    Preset {
        name: "nakagami-gg",
        title: "(Nakagami-m)-(Gamma-Gamma)",
        alpha: 2.0,
        mu: 1.0,
        g_d: G_D_GUARD,
        omega_cap_d: 1.0,
        rho: 1.0,
    },
    Preset {
        name: "rayleigh-gg",
        title: "Rayleigh-(Gamma-Gamma)",
        alpha: 2.0,
        mu: 0.5,
        g_d: G_D_GUARD,
        omega_cap_d: 1.0,
        rho: 1.0,
    },
    Preset {
        name: "weibull-lognormal",
        title: "Weibull-Lognormal",
        alpha: 4.0,
        mu: 0.5,
        g_d: 0.0001,
        omega_cap_d: 1.3265,
        rho: 0.0,
    },
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find_preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// The preset on the figure-13 operating point: (α_d, β_d) = (8, 4),
    /// heterodyne, u_r = 20 dB, ω_v = −10 dB, ω_r swept 0–40 dB.
    pub fn scenario(&self) -> ScenarioFile {
        let mut f = baseline();
        f.main_rf = rf(self.alpha, self.mu, 10.0);
        f.eve_rf = rf(self.alpha, self.mu, -10.0);
        f.fso.alpha_d = 8.0;
        f.fso.beta_d = 4;
        f.fso.power = FsoPower::Direct {
            g_d: self.g_d,
            omega_cap_d: self.omega_cap_d,
        };
        f.fso.u_r_db = 20.0;
        f.rs_bits = 0.1;
        f.sweep = sweep(SweepKey::MainOmega);
        f
    }

    pub fn text(&self) -> String {
        format!(
            "# {}: alpha_r = alpha_v = {}, mu_r = mu_v = {}, g_d = {}, Omega_d = {}, rho = {}\n\
             # rho enters only through g_d and omega_cap_d\n{}",
            self.title,
            self.alpha,
            self.mu,
            self.g_d,
            self.omega_cap_d,
            self.rho,
            self.scenario().to_text()
        )
    }
}

/// One curve of a figure: its label, the plotted metric and the sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub metric: Metric,
    pub file: ScenarioFile,
}

fn turbulence_by_detection(
    metric: Metric,
    key: SweepKey,
    adjust: impl Fn(&mut ScenarioFile),
) -> Vec<Curve> {
    let mut out = Vec::new();
    for (name, a, b) in TURBULENCE {
        for det in DETECTIONS {
            let mut f = baseline();
            adjust(&mut f);
            f.fso.alpha_d = a;
            f.fso.beta_d = b;
            f.fso.detection = det;
            f.sweep = sweep(key);
            out.push(Curve {
                label: format!("{name}-{}", det.name()),
                metric,
                file: f,
            });
        }
    }
    out
}

fn pointing_by_detection(
    metric: Metric,
    key: SweepKey,
    adjust: impl Fn(&mut ScenarioFile),
) -> Vec<Curve> {
    let mut out = Vec::new();
    for eps in [1.0, 6.7] {
        for det in DETECTIONS {
            let mut f = baseline();
            adjust(&mut f);
            f.fso.epsilon = eps;
            f.fso.detection = det;
            f.sweep = sweep(key);
            out.push(Curve {
                label: format!("eps{eps}-{}", det.name()),
                metric,
                file: f,
            });
        }
    }
    out
}

/// RF shape grid for figures 10 and 11: (α, μ) pairs crossed with ω_v.
const SHAPES: [(f64, f64); 3] = [(2.0, 1.0), (4.0, 1.0), (4.0, 2.0)];
const EVE_LEVELS_DB: [f64; 2] = [0.0, 5.0];

/// Curves for figure `id` (2 to 13).
pub fn figure(id: u32) -> Result<Vec<Curve>, String> {
    use Metric::*;
    use SweepKey::*;
    let curves = match id {
        2 => turbulence_by_detection(Asc, MainOmega, |_| {}),
        3 => turbulence_by_detection(Asc, FsoSnr, |_| {}),
        4 => turbulence_by_detection(Sop, MainOmega, |f| f.rs_bits = 0.1),
        5 => pointing_by_detection(Asc, FsoSnr, |_| {}),
        6 => pointing_by_detection(Pnsc, MainOmega, |f| f.eve_rf.omega_db = -5.0),
        7 => turbulence_by_detection(Pnsc, MainOmega, |f| f.eve_rf.omega_db = -10.0),
        8 => turbulence_by_detection(Sop, MainOmega, |f| {
            f.rs_bits = 0.1;
            f.eve_rf.omega_db = 5.0;
        }),
        9 => [-5.0, 0.0, 5.0]
            .into_iter()
            .map(|wv| {
                let mut f = baseline();
                f.eve_rf.omega_db = wv;
                f.sweep = sweep(MainOmega);
                Curve {
                    label: format!("wv{wv}dB"),
                    metric: Asc,
                    file: f,
                }
            })
            .collect(),
        10 | 11 => {
            let mut out = Vec::new();
            for (a, mu) in SHAPES {
                for wv in EVE_LEVELS_DB {
                    let mut f = baseline();
                    f.fso.epsilon = 1.0;
                    f.eve_rf.omega_db = wv;
                    f.sweep = sweep(MainOmega);
                    let (side, metric) = if id == 10 {
                        f.main_rf.alpha = a;
                        f.main_rf.mu = mu;
                        f.rs_bits = 0.1;
                        ("r", Sop)
                    } else {
                        f.main_rf.alpha = 2.0;
                        f.eve_rf.alpha = a;
                        f.eve_rf.mu = mu;
                        f.fso.alpha_d = 8.0;
                        f.fso.beta_d = 4;
                        f.fso.u_r_db = 15.0;
                        ("v", Pnsc)
                    };
                    out.push(Curve {
                        label: format!("alpha{side}{a}-mu{side}{mu}-wv{wv}dB"),
                        metric,
                        file: f,
                    });
                }
            }
            out
        }
        12 => [0.1, 0.5, 1.0]
            .into_iter()
            .map(|rs| {
                let mut f = baseline();
                f.fso.alpha_d = 8.0;
                f.fso.beta_d = 4;
                f.fso.u_r_db = 5.0;
                f.eve_rf.omega_db = -5.0;
                f.rs_bits = rs;
                f.sweep = sweep(MainOmega);
                Curve {
                    label: format!("rs{rs}"),
                    metric: Sop,
                    file: f,
                }
            })
            .collect(),
        13 => PRESETS
            .iter()
            .map(|p| Curve {
                label: p.name.to_string(),
                metric: Sop,
                file: p.scenario(),
            })
            .collect(),
        _ => return Err(format!("figure id must be between 2 and 13, got {id}")),
    };
    Ok(curves)
}
