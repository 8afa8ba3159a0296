use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{read_json, KitError};

/// Tolerances used by the scenario when the config does not override them.
pub const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("pullback", 1e-9),
    ("jacobian_det_rel", 1e-10),
    ("reeb_residual", 1e-8),
    ("pole_flow", 1e-12),
    ("z_slack", 1e-10),
    ("period", 1e-6),
    ("rk4_ratio_min", 14.0),
    ("rk4_ratio_max", 18.0),
    ("floquet", 1e-6),
    ("orbit_return", 1e-3),
];

/// The surgered ledger shipped with the kit, used when no ledger path is set.
pub const BUNDLED_LEDGER: &str = include_str!("../../../fixtures/surgered.json");

fn default_epsilon() -> f64 {
    0.5
}
fn default_step() -> f64 {
    1e-4
}
fn default_resolution() -> usize {
    512
}
fn default_samples() -> usize {
    1000
}
fn default_seed() -> u64 {
    7
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_step")]
    pub rk4_step: f64,
    #[serde(default = "default_resolution")]
    pub spectral_resolution: usize,
    /// Overrides for [`DEFAULT_TOLERANCES`].
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Relative paths are taken from the directory of the config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ledger_path: Option<PathBuf>,
    /// Random sample points per pointwise check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            epsilon: default_epsilon(),
            rk4_step: default_step(),
            spectral_resolution: default_resolution(),
            tolerances: BTreeMap::new(),
            ledger_path: None,
            samples: default_samples(),
            seed: default_seed(),
            base_dir: None,
        }
    }
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, KitError> {
        let mut config: ScenarioConfig = read_json(path)?;
        config.base_dir = path.parent().map(Path::to_path_buf);
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), KitError> {
        let bad = |m: String| Err(KitError::input("config", m));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.rk4_step > 0.0 && self.rk4_step.is_finite()) {
            return bad(format!("rk4_step must be positive, got {}", self.rk4_step));
        }
        if self.spectral_resolution < 64 || self.spectral_resolution % 2 != 0 {
            return bad(format!(
                "spectral_resolution must be even and at least 64, got {}",
                self.spectral_resolution
            ));
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        for (name, value) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return bad(format!("unknown tolerance {name}"));
            }
            if !(*value > 0.0 && value.is_finite()) {
                return bad(format!("tolerance {name} must be positive, got {value}"));
            }
        }
        if self.tolerance("rk4_ratio_min") >= self.tolerance("rk4_ratio_max") {
            return bad("rk4_ratio_min must be below rk4_ratio_max".into());
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        if let Some(v) = self.tolerances.get(name) {
            return *v;
        }
        DEFAULT_TOLERANCES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .unwrap_or_else(|| panic!("no default tolerance {name}"))
    }

    /// All tolerances in effect, defaults merged with overrides.
    pub fn effective_tolerances(&self) -> BTreeMap<String, f64> {
        DEFAULT_TOLERANCES
            .iter()
            .map(|(n, _)| (n.to_string(), self.tolerance(n)))
            .collect()
    }

    pub fn resolved_ledger_path(&self) -> Option<PathBuf> {
        let p = self.ledger_path.as_ref()?;
        Some(match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.clone(),
        })
    }

    /// Contents of the configured ledger, or the bundled one.
    pub fn ledger_source(&self) -> Result<String, KitError> {
        match self.resolved_ledger_path() {
            Some(p) => std::fs::read_to_string(&p)
                .map_err(|e| KitError::input("io", format!("{}: {e}", p.display()))),
            None => Ok(BUNDLED_LEDGER.to_string()),
        }
    }
}
