use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::format::OutputFormat;
use crate::hurst::PartitionPolicy;
use crate::ingest::Frequency;
use crate::returns::Scale;
use crate::synth::SynthKind;

fn parse_frequency(s: &str) -> Result<Frequency, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_policy(s: &str) -> Result<PartitionPolicy, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<SynthKind, String> {
    s.parse().map_err(|e: crate::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "fractalis", version, about = "Rescaled-range Hurst analysis of return series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Descriptive statistics and Jarque-Bera normality test.
    Stats(CommonArgs),
    /// Augmented Dickey-Fuller unit-root test.
    Adf(AdfArgs),
    /// Hurst exponent with slope t-test and memory classification.
    Hurst(HurstArgs),
    /// Hurst exponent over sliding windows.
    Rolling(RollingArgs),
    /// Pearson correlation matrix of aligned returns.
    Corr(CommonArgs),
    /// Generate a synthetic price series in the input CSV format.
    Synth(SynthArgs),
    /// Run every analysis and write the results to a directory.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Input binding `ASSET=PATH`; repeatable.
    #[arg(long = "input", value_name = "ASSET=PATH")]
    pub inputs: Vec<String>,
    /// Sampling frequency (15m, 1h, 1d); repeatable.
    #[arg(long = "freq", value_parser = parse_frequency)]
    pub frequencies: Vec<Frequency>,
    /// Start of the analysis period (inclusive).
    #[arg(long)]
    pub from: Option<String>,
    /// End of the analysis period; a bare date is inclusive.
    #[arg(long)]
    pub to: Option<String>,
    /// Keep Monday to Friday observations only.
    #[arg(long)]
    pub weekdays_only: bool,
    /// Raise returns to this odd power.
    #[arg(long)]
    pub power: Option<u32>,
    /// Return scale (percent or raw).
    #[arg(long, value_parser = parse_scale)]
    pub scale: Option<Scale>,
    /// Output format (md, csv or json).
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// Flat TOML file with defaults; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct HurstOptionArgs {
    /// Block-length grid (halving or harmonic).
    #[arg(long, value_parser = parse_policy)]
    pub policy: Option<PartitionPolicy>,
    /// Drop the single-block scale n = N from the regression.
    #[arg(long)]
    pub exclude_full: bool,
    /// Confidence level of the slope interval.
    #[arg(long)]
    pub confidence: Option<f64>,
    /// Significance level used for classification.
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct AdfArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Lag order; defaults to floor((n - 1)^(1/3)).
    #[arg(long)]
    pub lag: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct HurstArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub hurst: HurstOptionArgs,
    /// Also estimate on subperiods split at this date; repeatable.
    #[arg(long = "split")]
    pub splits: Vec<String>,
    /// Write the log-log curve, fitted line and band as CSV.
    #[arg(long)]
    pub dump_curve: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RollingArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub hurst: HurstOptionArgs,
    /// Window length in returns.
    #[arg(long)]
    pub window: Option<usize>,
    /// Step between window starts.
    #[arg(long)]
    pub step: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub hurst: HurstOptionArgs,
    /// Also estimate Hurst on subperiods split at this date; repeatable.
    #[arg(long = "split")]
    pub splits: Vec<String>,
    /// ADF lag order.
    #[arg(long)]
    pub lag: Option<usize>,
    /// Rolling window length in returns.
    #[arg(long)]
    pub window: Option<usize>,
    /// Rolling step.
    #[arg(long)]
    pub step: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Generator: white, fgn or walk.
    #[arg(long, value_parser = parse_kind, default_value = "fgn")]
    pub kind: SynthKind,
    /// Number of returns (the file has n + 1 prices).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Hurst exponent of the fGn generator.
    #[arg(long = "hurst", default_value_t = 0.5)]
    pub h: f64,
    /// Standard deviation of the raw log returns.
    #[arg(long, default_value_t = 0.02)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Initial price.
    #[arg(long, default_value_t = 100.0)]
    pub p0: f64,
    #[arg(long, default_value = "SYN")]
    pub asset: String,
    /// Timestamp of the first price.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long = "freq", value_parser = parse_frequency, default_value = "1d")]
    pub frequency: Frequency,
    /// Write `<ASSET>.csv` into this directory instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
