use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::experiments::ExperimentResult;
use crate::plots::emit_plots;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    pub config_sha256: String,
    pub config: ExperimentConfig,
}

/// SHA-256 of the compact JSON form of the config.
pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    let bytes = serde_json::to_vec(cfg)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

pub fn provenance(command: &str, cfg: &ExperimentConfig) -> Result<Provenance> {
    Ok(Provenance {
        tool: "sepcap",
        version: env!("CARGO_PKG_VERSION"),
        command: command.into(),
        seed: cfg.network.seed,
        trials: cfg.trials,
        config_sha256: config_hash(cfg)?,
        config: cfg.clone(),
    })
}

/// `result.json`, `trials.csv`, `provenance.json` and `plots/`, all
/// reproducible from the config; wall-clock times go to `timing.json`.
pub fn write_outputs(result: &ExperimentResult, cfg: &ExperimentConfig, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("result.json"), serde_json::to_string_pretty(result)? + "\n")?;
    std::fs::write(dir.join("trials.csv"), &result.trials_csv)?;
    let prov = provenance(&result.command, cfg)?;
    std::fs::write(dir.join("provenance.json"), serde_json::to_string_pretty(&prov)? + "\n")?;
    emit_plots(&result.sweeps, dir)?;
    let total: f64 = result.runtimes.iter().sum();
    let timing = serde_json::json!({"total_seconds": total, "per_trial_seconds": result.runtimes});
    std::fs::write(dir.join("timing.json"), serde_json::to_string_pretty(&timing)? + "\n")?;
    Ok(())
}
