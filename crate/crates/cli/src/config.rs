//! Run configuration: a JSON document mirroring the CLI flags. Values from
//! the file are overridden field-by-field by explicit flags; unset fields
//! fall back to documented defaults.

use std::path::PathBuf;

use raman_ctrl::analysis::{SchemeKind, DEFAULT_SEED};
use raman_ctrl::parse::parse_angle;
use serde::{Deserialize, Serialize};

pub const DEFAULT_OMEGA: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Ae,
    Ps,
    Stirap,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ae => "ae",
            Scheme::Ps => "ps",
            Scheme::Stirap => "stirap",
        }
    }

    pub fn kind(self) -> Option<SchemeKind> {
        match self {
            Scheme::Ae => Some(SchemeKind::Ae),
            Scheme::Ps => Some(SchemeKind::Ps),
            Scheme::Stirap => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    #[clap(name = "0")]
    #[serde(rename = "0")]
    Zero,
    #[clap(name = "1")]
    #[serde(rename = "1")]
    One,
    #[clap(name = "e")]
    #[serde(rename = "e")]
    Excited,
    #[clap(name = "b")]
    #[serde(rename = "b")]
    Bright,
    #[clap(name = "d")]
    #[serde(rename = "d")]
    Dark,
}

/// Angle fields accept literal numbers or π tokens in both the config file
/// and on the command line.
fn angle_from_json<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Num(x)) => Ok(Some(x)),
        Some(Raw::Text(s)) => parse_angle(&s)
            .map(Some)
            .map_err(|e| serde::de::Error::custom(e.to_string())),
    }
}

/// All run parameters, each optional so file and flags can be merged.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scheme: Option<Scheme>,
    pub delta_ratio: Option<f64>,
    pub omega: Option<f64>,
    #[serde(default, deserialize_with = "angle_from_json")]
    pub theta: Option<f64>,
    #[serde(default, deserialize_with = "angle_from_json")]
    pub xi: Option<f64>,
    pub initial: Option<InitialState>,
    pub gamma: Option<f64>,
    pub delta_omega: Option<f64>,
    pub delta_delta: Option<f64>,
    pub sigma: Option<f64>,
    pub t_m: Option<f64>,
    pub total_time: Option<f64>,
    pub n_samples: Option<usize>,
    pub dt: Option<f64>,
    pub record_stride: Option<usize>,
    pub seed: Option<u64>,
    pub out_csv: Option<PathBuf>,
    pub out_json: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("invalid config: {e}"))
    }

    /// Field-wise override: any value set in `flags` wins over `self`.
    pub fn merged_with(mut self, flags: RunConfig) -> Self {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(
            scheme, delta_ratio, omega, theta, xi, initial, gamma, delta_omega, delta_delta,
            sigma, t_m, total_time, n_samples, dt, record_stride, seed, out_csv, out_json
        );
        self
    }
}

/// The fully resolved configuration embedded in every emitted dataset.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveConfig {
    pub scheme: Scheme,
    pub delta_ratio: f64,
    pub omega: f64,
    pub theta: f64,
    pub xi: f64,
    pub initial: InitialState,
    pub gamma: f64,
    pub delta_omega: f64,
    pub delta_delta: f64,
    pub sigma: Option<f64>,
    pub t_m: Option<f64>,
    pub total_time: Option<f64>,
    pub n_samples: usize,
    pub dt: Option<f64>,
    pub record_stride: usize,
    pub seed: u64,
}

impl EffectiveConfig {
    pub fn resolve(cfg: &RunConfig) -> Result<Self, String> {
        let scheme = cfg.scheme.ok_or("missing scheme")?;
        let effective = EffectiveConfig {
            scheme,
            delta_ratio: cfg.delta_ratio.unwrap_or(2.0),
            omega: cfg.omega.unwrap_or(DEFAULT_OMEGA),
            theta: cfg.theta.unwrap_or(std::f64::consts::PI),
            xi: cfg.xi.unwrap_or(0.0),
            initial: cfg.initial.unwrap_or(InitialState::Zero),
            gamma: cfg.gamma.unwrap_or(0.0),
            delta_omega: cfg.delta_omega.unwrap_or(0.0),
            delta_delta: cfg.delta_delta.unwrap_or(0.0),
            sigma: cfg.sigma,
            t_m: cfg.t_m,
            total_time: cfg.total_time,
            n_samples: cfg.n_samples.unwrap_or(raman_ctrl::analysis::STIRAP_SAMPLES),
            dt: cfg.dt,
            record_stride: cfg.record_stride.unwrap_or(1),
            seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        };
        if !(effective.omega.is_finite() && effective.omega > 0.0) {
            return Err(format!("omega must be positive, got {}", effective.omega));
        }
        if !(effective.gamma.is_finite() && effective.gamma >= 0.0) {
            return Err(format!("gamma must be nonnegative, got {}", effective.gamma));
        }
        if scheme != Scheme::Stirap
            && !(effective.delta_ratio.is_finite() && effective.delta_ratio >= 0.0)
        {
            return Err(format!(
                "delta-ratio must be nonnegative, got {}",
                effective.delta_ratio
            ));
        }
        Ok(effective)
    }

    pub fn integrator(&self) -> raman_ctrl::propagation::IntegratorConfig {
        raman_ctrl::propagation::IntegratorConfig {
            dt: self.dt,
            record_stride: self.record_stride,
            ..Default::default()
        }
    }
}
