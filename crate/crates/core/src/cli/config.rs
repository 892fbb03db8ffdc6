//! Run configuration: a flat JSON document with explicit unit tags on every
//! dimensional rate.
//!
//! ```json
//! {
//!   "f0":    {"value": 1820,  "unit": "hz"},
//!   "nu":    {"value": 0.004, "unit": "fraction_of_omega0"},
//!   "gamma": {"value": 2,     "unit": "multiple_of_nu"},
//!   "kappa": 1.0,
//!   "sigma": 0.6,
//!   "epsilon": 0.3
//! }
//! ```
//!
//! `grid`, `branch_policy`, `sim` and `output` are optional.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forced_response::BranchPolicy;
use crate::model::ModelParams;
use crate::sweep::GridSpec;
use crate::timedomain::SimConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Hz,
    RadPerS,
    FractionOfOmega0,
    MultipleOfNu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Quantity {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Unit>,
}

impl Quantity {
    pub fn new(value: f64, unit: Unit) -> Self {
        Self {
            value,
            unit: Some(unit),
        }
    }

    fn unit_for(&self, field: &str) -> Result<Unit> {
        self.unit
            .ok_or_else(|| Error::Config(format!("{field}: missing unit tag")))
    }
}

/// Overrides for the time-domain integration, all in seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_transient_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_measure_s: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// Also write `timeseries.csv` from `oracle`.
    #[serde(default)]
    pub timeseries: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub f0: Quantity,
    pub nu: Quantity,
    pub gamma: Quantity,
    pub kappa: f64,
    pub sigma: f64,
    pub epsilon: f64,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub branch_policy: BranchPolicy,
    #[serde(default)]
    pub sim: SimOverrides,
    #[serde(default)]
    pub output: OutputConfig,
}

impl RunConfig {
    /// The biased side-cavity example in Hz-facing units.
    pub fn biased_cavity() -> Self {
        Self {
            f0: Quantity::new(1820.0, Unit::Hz),
            nu: Quantity::new(0.004, Unit::FractionOfOmega0),
            gamma: Quantity::new(2.0, Unit::MultipleOfNu),
            kappa: 1.0,
            sigma: 0.6,
            epsilon: 0.3,
            grid: GridSpec::default(),
            branch_policy: BranchPolicy::default(),
            sim: SimOverrides::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.params()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Converts to model parameters in rad/s.
    pub fn params(&self) -> Result<ModelParams> {
        let omega0 = match self.f0.unit_for("f0")? {
            Unit::Hz => TAU * self.f0.value,
            Unit::RadPerS => self.f0.value,
            u => return Err(Error::Config(format!("f0: unit {u:?} not allowed; use hz or rad_per_s"))),
        };
        let nu = match self.nu.unit_for("nu")? {
            Unit::RadPerS => self.nu.value,
            Unit::FractionOfOmega0 => self.nu.value * omega0,
            u => {
                return Err(Error::Config(format!(
                    "nu: unit {u:?} not allowed; use rad_per_s or fraction_of_omega0"
                )))
            }
        };
        let gamma = match self.gamma.unit_for("gamma")? {
            Unit::RadPerS => self.gamma.value,
            Unit::FractionOfOmega0 => self.gamma.value * omega0,
            Unit::MultipleOfNu => self.gamma.value * nu,
            Unit::Hz => {
                return Err(Error::Config(
                    "gamma: unit Hz not allowed; use rad_per_s, fraction_of_omega0 or multiple_of_nu".into(),
                ))
            }
        };
        ModelParams::new(omega0, nu, self.kappa, gamma, self.sigma, self.epsilon)
    }

    /// Time-domain settings for forcing at `omega`, defaults overlaid with
    /// the configured overrides.
    pub fn sim_config(&self, p: &ModelParams, omega: f64) -> SimConfig {
        let mut cfg = SimConfig::for_forcing(p, omega);
        if let Some(dt) = self.sim.dt_s {
            cfg.dt = dt;
        }
        if let Some(t) = self.sim.t_transient_s {
            cfg.t_transient = t;
        }
        if let Some(t) = self.sim.t_measure_s {
            cfg.t_measure = t;
        }
        cfg
    }
}
