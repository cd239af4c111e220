use crate::error::{HarnessError, Result};
use sepcap_core::complexity::AbsoluteConstants;
use sepcap_core::scenarios::ScenarioConfig;
use sepcap_core::separator::GeometryConstants;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// `k` in the default `λ̂ = k·(λ/δ)⁴·(α+λ)`.
pub const DEFAULT_LAMBDA_HAT_CONSTANT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Analysis {
    Separation,
    MarginVsBound,
    ProbabilityCurve,
    Deviation,
    FirstLayerGeometry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfig {
    pub n: usize,
    pub n_hat: usize,
    pub lambda: f64,
    /// Derived from `lambda_hat_k` when absent.
    #[serde(default)]
    pub lambda_hat: Option<f64>,
    #[serde(default = "default_k")]
    pub lambda_hat_k: f64,
    /// Complexity parameter; `√log N⁺` for finite sets and the sum of the
    /// estimated mean widths otherwise.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Scale each layer by `√(2/n_in)` instead of `√(2/n_out)`.
    #[serde(default)]
    pub he_scaling: bool,
}

fn default_k() -> f64 {
    DEFAULT_LAMBDA_HAT_CONSTANT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub n_hat: Vec<usize>,
    pub t: Vec<f64>,
    pub lambda: Vec<f64>,
    pub n: Vec<usize>,
    pub epsilon: f64,
    pub width_samples: usize,
    pub covering_lambda: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_hat: Vec::new(),
            t: Vec::new(),
            lambda: Vec::new(),
            n: Vec::new(),
            epsilon: 0.25,
            width_samples: 2000,
            covering_lambda: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub network: NetworkConfig,
    #[serde(default = "default_analysis")]
    pub analysis: Vec<Analysis>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub constants: AbsoluteConstants,
    #[serde(default)]
    pub geometry: GeometryConstants,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

fn default_analysis() -> Vec<Analysis> {
    vec![Analysis::Separation]
}

fn default_trials() -> usize {
    1
}

impl ExperimentConfig {
    pub fn new(scenario: ScenarioConfig, network: NetworkConfig) -> Self {
        ExperimentConfig {
            scenario,
            network,
            analysis: default_analysis(),
            trials: 1,
            constants: AbsoluteConstants::default(),
            geometry: GeometryConstants::default(),
            sweep: SweepConfig::default(),
            output_dir: None,
        }
    }

    /// Accepts either a config document or a `provenance.json` written by a
    /// previous run.
    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| HarnessError::Config(e.to_string()))?;
        let v = match v.get("config") {
            Some(inner) if v.get("config_sha256").is_some() => inner.clone(),
            _ => v,
        };
        let cfg: ExperimentConfig = serde_json::from_value(v).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let s = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        self.scenario.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        let n = &self.network;
        if n.n == 0 || n.n_hat == 0 {
            return bad("layer widths must be positive".into());
        }
        if !(n.lambda >= 0.0 && n.lambda.is_finite()) {
            return bad(format!("lambda must be a nonnegative number, got {}", n.lambda));
        }
        if let Some(l) = n.lambda_hat {
            if !(l >= 0.0 && l.is_finite()) {
                return bad(format!("lambda_hat must be a nonnegative number, got {l}"));
            }
        }
        if !(n.lambda_hat_k > 0.0) {
            return bad("lambda_hat_k must be positive".into());
        }
        let c = &self.constants;
        for (name, v) in [("c", c.c), ("big_c", c.big_c), ("c_prime", c.c_prime), ("c1", c.c1)] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("constant {name} must be positive, got {v}"));
            }
        }
        if !(self.geometry.c > 0.0 && self.geometry.c_prime > 0.0) {
            return bad("geometry constants must be positive".into());
        }
        if self.sweep.n_hat.contains(&0) || self.sweep.n.contains(&0) {
            return bad("sweep widths must be positive".into());
        }
        if self.sweep.t.iter().any(|t| !(*t >= 0.0)) || self.sweep.lambda.iter().any(|l| !(*l > 0.0)) {
            return bad("sweep values of t must be ≥ 0 and of lambda > 0".into());
        }
        Ok(())
    }

    pub fn has(&self, a: Analysis) -> bool {
        self.analysis.contains(&a)
    }
}
