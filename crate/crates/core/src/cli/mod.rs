//! Command-line front end shared by the `distchaos` binary.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub use config::{ExperimentConfig, Settings};

use crate::error::Result;

/// Exit status 0.
pub const EXIT_PASS: i32 = 0;
/// Exit status of a verification that ran but failed.
pub const EXIT_FAIL: i32 = 1;
/// Exit status of configuration and runtime errors.
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "distchaos", version, about = "Distributional-chaos experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ψ profile and DC classification of a pair (or of a DC1 family).
    Psi(PsiArgs),
    /// Certificate that a point of the shift is a DC1 point.
    ShiftDcpoint(ShiftDcpointArgs),
    /// Search for a horseshoe of an interval map.
    Horseshoe(HorseshoeArgs),
    /// DC1 points of a positive-entropy interval map via itinerary pull-back.
    Dc1Points(Dc1PointsArgs),
    /// Period-doubling intervals and a fiber-range trace of the triangular map.
    Kolyada(KolyadaArgs),
    /// Envelope-shrinkage test and fiber-pair classification.
    Envelope(EnvelopeArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Common {
    /// key = value file; its entries override flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct PsiArgs {
    /// `tent:s`, `logistic:λ`, `pwl:x,y;…` or `shift`.
    #[arg(long)]
    pub system: Option<String>,
    /// Two comma-separated points.
    #[arg(long)]
    pub pair: Option<String>,
    /// Classify every pair of the first N members of the DC1 family (shift only).
    #[arg(long)]
    pub family: Option<usize>,
    #[arg(long)]
    pub schedule: Option<u32>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// `geometric` or `checkpoints`.
    #[arg(long)]
    pub horizons: Option<String>,
    #[arg(long)]
    pub per_octave: Option<usize>,
    /// Comma-separated thresholds.
    #[arg(long)]
    pub t_grid: Option<String>,
    /// `upper-half` or `all`.
    #[arg(long)]
    pub window: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct ShiftDcpointArgs {
    /// `pre|per` or `family:id:word`.
    #[arg(long)]
    pub x0: Option<String>,
    /// `1/m`, `p/q` or a decimal.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Certify this many random points instead of `--x0`.
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub family_size: Option<usize>,
    #[arg(long)]
    pub schedule: Option<u32>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct HorseshoeArgs {
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Dc1PointsArgs {
    #[arg(long)]
    pub system: Option<String>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    /// Symbol sequence `pre|per` of the base point.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub family_size: Option<usize>,
    #[arg(long)]
    pub schedule: Option<u32>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct KolyadaArgs {
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Deepest interval level N.
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Height-field depth D.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Rule `ai+b` for the level sequence.
    #[arg(long)]
    pub nseq: Option<String>,
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Plateau level of the base point.
    #[arg(long)]
    pub x0_plateau: Option<usize>,
    #[arg(long)]
    pub tail: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct EnvelopeArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k0: Option<usize>,
    /// Fiber height of the envelope; defaults to `2^-m`.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub nseq: Option<String>,
    /// Number of fiber pairs to classify.
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub pair_horizon: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

/// Runs a parsed command line and returns the exit status.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Psi(a) => commands::psi(&a),
        Command::ShiftDcpoint(a) => commands::shift_dcpoint(&a),
        Command::Horseshoe(a) => commands::horseshoe(&a),
        Command::Dc1Points(a) => commands::dc1_points(&a),
        Command::Kolyada(a) => commands::kolyada(&a),
        Command::Envelope(a) => commands::envelope(&a),
    }
}
