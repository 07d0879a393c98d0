use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "exoverse", version, about = "Virtual-environment torque rendering for a lower-limb exoskeleton")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the environment catalog with derived Reynolds numbers and drag coefficients.
    Envs(EnvsArgs),
    /// Environment torques along a prescribed gait cycle.
    Playback(PlaybackArgs),
    /// Closed-loop simulation of the torque controller around a modeled leg.
    Simulate(SimulateArgs),
    /// RMS, correlation, envelope and phase reductions of a trace.
    Analyze(AnalyzeArgs),
    /// Re-run the command recorded in a manifest and compare its outputs.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory; created if missing.
    #[arg(long, default_value = "exoverse-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EnvsArgs {
    /// Print the catalog as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Compare the built-in catalog with the reference Reynolds numbers and drag coefficients.
    #[arg(long)]
    pub check: bool,
    /// Extra environments (JSON object or array) appended to the catalog.
    #[arg(long)]
    pub env_file: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PlaybackArgs {
    /// Built-in environment name or a JSON environment file. Repeatable.
    #[arg(long, required_unless_present = "all_envs")]
    pub env: Vec<String>,
    /// Every built-in environment.
    #[arg(long, conflicts_with = "env")]
    pub all_envs: bool,
    /// `synthetic` or a gait CSV file.
    #[arg(long, default_value = "synthetic")]
    pub gait: String,
    /// Walking speed for the synthetic gait, m/s.
    #[arg(long, default_value_t = exoverse_core::gait::DEFAULT_WALKING_SPEED)]
    pub walking_speed: f64,
    /// s.
    #[arg(long, default_value_t = exoverse_core::gait::DEFAULT_CYCLE_DURATION)]
    pub cycle_duration: f64,
    /// Also write the RMS decomposition table.
    #[arg(long)]
    pub rms: bool,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// JSON run configuration.
    pub config: PathBuf,
    /// Overrides `EXOVERSE_SEED` and the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// `env=a,b,c`: one run per virtual environment, in parallel.
    #[arg(long)]
    pub sweep: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// Trace CSV; a JSON sidecar next to it is used when present.
    pub trace: PathBuf,
    /// Gravity/buoyancy/drag RMS per joint.
    #[arg(long)]
    pub rms: bool,
    /// Pearson r between the phase-averaged profiles of two columns.
    #[arg(long, num_args = 2, value_names = ["COL_A", "COL_B"])]
    pub pearson: Option<Vec<String>>,
    /// EMG-style envelope of each `--column`.
    #[arg(long, requires = "fs")]
    pub envelope: bool,
    /// Sample rate for `--envelope`, Hz.
    #[arg(long)]
    pub fs: Option<f64>,
    /// Mean and standard deviation across cycles of each `--column`.
    #[arg(long)]
    pub phase: bool,
    /// Columns for `--envelope` and `--phase`.
    #[arg(long = "column", default_values = ["tau_M1", "tau_M2"])]
    pub columns: Vec<String>,
    /// Phase bins, 0% through 100%.
    #[arg(long, default_value_t = exoverse_core::analysis::DEFAULT_PHASE_BINS)]
    pub bins: usize,
    /// Cycle length for traces without a sidecar, s. Defaults to the whole file.
    #[arg(long)]
    pub cycle_duration: Option<f64>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
    /// Write the regenerated outputs here instead of the recorded directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
