use clap::{Args, Parser, Subcommand};
use sepcap_harness::output::write_outputs;
use sepcap_harness::{
    run_calibrate, run_deviation_sweep, run_mean_width, run_mutual_cover, run_probability_curve,
    run_separation_experiment, ExperimentConfig, HarnessError, Result,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sepcap", version, about = "Separation experiments with random two-layer ReLU networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear separability of the network images over trials.
    Separate(Common),
    /// Hyperplane separation probability against t.
    ProbCurve(Common),
    /// Distance deviation of one random layer against its width.
    Deviation(Common),
    /// Mutual covering and complexity parameters.
    MutualCover(Common),
    /// Gaussian mean widths of both classes.
    MeanWidth(Common),
    /// Fit the absolute constants to Monte Carlo data.
    Calibrate(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, env = "SEPCAP_THREADS")]
    threads: Option<usize>,
}

fn run(cli: Cli) -> Result<()> {
    let (common, name, f): (Common, &str, fn(&ExperimentConfig) -> Result<_>) = match cli.command {
        Command::Separate(c) => (c, "separate", run_separation_experiment),
        Command::ProbCurve(c) => (c, "prob-curve", run_probability_curve),
        Command::Deviation(c) => (c, "deviation", run_deviation_sweep),
        Command::MutualCover(c) => (c, "mutual-cover", run_mutual_cover),
        Command::MeanWidth(c) => (c, "mean-width", run_mean_width),
        Command::Calibrate(c) => (c, "calibrate", run_calibrate),
    };
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(s) = common.seed {
        cfg.network.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(HarnessError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
    }
    let out = common.out.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("sepcap-out").join(name));
    let result = f(&cfg)?;
    write_outputs(&result, &cfg, &out)?;
    println!("{name}: wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
