use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "flowband",
    version,
    about = "Adaptive difficulty simulation and skeleton accuracy tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a simulated treatment course.
    Simulate(SimulateArgs),
    /// Rotation-distance accuracy of condition recordings against a gold recording.
    Nmsrd(NmsrdArgs),
    /// Compare two-player balancing strategies.
    Balance(BalanceArgs),
    /// Treatment plan utilities.
    #[command(subcommand)]
    Plan(PlanCommand),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Simulation config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite existing outputs.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct NmsrdArgs {
    /// Gold-standard recording (JSON).
    #[arg(long)]
    pub gold: PathBuf,
    /// Condition recording as NAME=PATH; repeat for each condition.
    #[arg(long = "condition", value_name = "NAME=PATH", required = true)]
    pub conditions: Vec<String>,
    /// Topology file (JSON). Defaults to the built-in Kinect v2 layout.
    #[arg(long)]
    pub topology: Option<PathBuf>,
    /// Comparison config (JSON): joint subset, repetition window, mirrored conditions.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Joint subset, comma separated; overrides the config's subset.
    #[arg(long, value_delimiter = ',')]
    pub subset: Option<Vec<String>>,
    /// Condition names whose recipient is mirrored before comparison.
    #[arg(long, value_delimiter = ',')]
    pub mirror: Vec<String>,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct BalanceArgs {
    /// Dyad config (JSON).
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum PlanCommand {
    /// Validate a plan file and print its per-session targets.
    Validate {
        #[arg(long)]
        config: PathBuf,
        /// Number of sessions to tabulate; defaults to one past the last milestone.
        #[arg(long)]
        sessions: Option<u32>,
    },
}
