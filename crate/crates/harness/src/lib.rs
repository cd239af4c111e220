//! Config-driven experiments over random two-layer ReLU networks: image
//! separation, hyperplane separation probabilities, distance deviation
//! sweeps, mutual coverings, mean widths and constant calibration.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod plots;

pub use config::{Analysis, ExperimentConfig, NetworkConfig, SweepConfig};
pub use error::{HarnessError, Result};
pub use experiments::{
    run_calibrate, run_deviation_sweep, run_mean_width, run_mutual_cover, run_probability_curve,
    run_separation_experiment, ExperimentResult,
};
