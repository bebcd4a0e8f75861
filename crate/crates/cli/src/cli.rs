use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::output::OutputFormat;

#[derive(Debug, Parser)]
#[command(name = "pondwatch", version, about = "Pond water-quality monitoring toolkit")]
pub struct Cli {
    /// Seed for every stochastic step (default 1).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// key = value configuration file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded sensor feed for one pond.
    Simulate(SimulateArgs),
    /// Run the telemetry HTTP service.
    Serve(ServeArgs),
    /// Judge pond suitability from readings.
    Verdict(VerdictArgs),
    /// Cross-validate classifiers and rank them.
    Evaluate(EvaluateArgs),
    /// Export fixtures, datasets, or re-render a saved report.
    ExportReport(ExportArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Serve(_) => "serve",
            Command::Verdict(_) => "verdict",
            Command::Evaluate(_) => "evaluate",
            Command::ExportReport(_) => "export-report",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Built-in pond profile (1-5).
    #[arg(long, conflicts_with = "profile")]
    pub pond: Option<u8>,
    /// Pond profile file (JSON or TOML).
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Seconds of stable recording after warm-up (default 3000).
    #[arg(long)]
    pub duration: Option<u64>,
    /// Seconds between readings (default 150).
    #[arg(long)]
    pub interval: Option<u64>,
    /// Seconds of sensor warm-up discarded from the output (default 180).
    #[arg(long)]
    pub warmup: Option<u64>,
    /// Timestamp of the first reading (default 2020-12-20T20:50:00Z).
    #[arg(long)]
    pub start: Option<String>,
    /// Also push every emitted entry to a running service at this base URL.
    #[arg(long)]
    pub post: Option<String>,
    /// Channel write key used with --post.
    #[arg(long)]
    pub api_key: Option<String>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Listen address (default 127.0.0.1:3000).
    #[arg(long)]
    pub bind: Option<String>,
    /// Storage root; falls back to PONDWATCH_DATA_DIR, then ./pondwatch-data.
    #[arg(long)]
    pub data_dir: Option<PathBuf>,
    /// Name of the channel created when the store is empty.
    #[arg(long)]
    pub channel_name: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["fixtures", "input", "url"])))]
pub struct VerdictArgs {
    /// Use the embedded survey readings of ponds 1-5.
    #[arg(long)]
    pub fixtures: bool,
    /// Feed export (csv/json/xml) or fixture-layout CSV; repeat for several ponds.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Live feed URL, e.g. http://host:3000/channels/1/feeds.csv
    #[arg(long)]
    pub url: Option<String>,
    /// Pond id reported for a single feed input (default: position, from 1).
    #[arg(long)]
    pub pond: Option<u8>,
    /// Minimum in-range fraction for a parameter to pass (default 0.70).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Drop feed entries inside this warm-up window, in seconds (default 0).
    #[arg(long)]
    pub warmup: Option<u64>,
    /// Static depth range "lo,hi" in metres, overriding depth samples.
    #[arg(long)]
    pub depth_range: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("data").required(true).args(["dataset", "synthetic"])))]
pub struct EvaluateArgs {
    /// Dataset CSV with header ph,temperature,turbidity,conductivity,depth,species.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Generate a synthetic dataset of this many instances instead.
    #[arg(long)]
    pub synthetic: Option<usize>,
    /// Synthetic feature noise as a fraction of envelope width (default 0).
    #[arg(long)]
    pub noise: Option<f64>,
    /// Comma-separated algorithm tags, or "all" (default all).
    #[arg(long)]
    pub algo: Option<String>,
    /// Cross-validation folds (default 10).
    #[arg(long)]
    pub folds: Option<usize>,
    /// Write one report JSON per algorithm plus the ranking into this directory.
    #[arg(long)]
    pub report_dir: Option<PathBuf>,
    /// Train each algorithm on the full dataset and save model files here.
    #[arg(long)]
    pub model_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["fixtures", "report", "synthetic"])))]
pub struct ExportArgs {
    /// Embedded fixture readings as pond_id,parameter,sample_index,value.
    #[arg(long)]
    pub fixtures: bool,
    /// Re-render a saved report JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Synthetic labeled dataset CSV of this many instances.
    #[arg(long)]
    pub synthetic: Option<usize>,
    /// Synthetic feature noise as a fraction of envelope width (default 0).
    #[arg(long)]
    pub noise: Option<f64>,
}
