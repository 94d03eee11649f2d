//! Run configuration: defaults, the optional flat TOML file, and flag overrides.
//!
//! Recognised file keys (all optional):
//!
//! ```toml
//! input = ["BTC=data/btc.csv", "ETH=data/eth.csv"]   # paths relative to the file
//! freq = ["1d", "1h"]
//! from = "2020-08-20"
//! to = "2023-02-24"            # bare dates are inclusive
//! split = ["2022-07-01"]
//! weekdays_only = false
//! power = 17
//! scale = "percent"
//! policy = "halving"
//! exclude_full = false
//! confidence = 0.99
//! alpha = 0.01
//! window = 150
//! step = 1
//! lag = 9
//! format = "md"
//! ```

use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use super::args::{CommonArgs, HurstOptionArgs};
use super::format::OutputFormat;
use crate::hurst::{PartitionPolicy, RsOptions, DEFAULT_CONFIDENCE, DEFAULT_WINDOW};
use crate::ingest::{parse_timestamp, Frequency, PeriodSpec};
use crate::returns::Scale;

pub const DEFAULT_ALPHA: f64 = 0.01;

/// Invalid or inconsistent configuration; reported as a usage error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputBinding {
    pub asset: String,
    pub path: PathBuf,
}

impl InputBinding {
    pub fn parse(raw: &str, base: Option<&Path>) -> Result<Self, UsageError> {
        let (asset, path) = raw
            .split_once('=')
            .ok_or_else(|| usage(format!("input `{raw}` is not of the form ASSET=PATH")))?;
        let asset = asset.trim();
        if asset.is_empty() || path.is_empty() {
            return Err(usage(format!("input `{raw}` is not of the form ASSET=PATH")));
        }
        let path = PathBuf::from(path);
        let path = match base {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path,
        };
        Ok(Self { asset: asset.to_string(), path })
    }
}

/// Fully resolved settings of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub inputs: Vec<InputBinding>,
    pub frequencies: Vec<Frequency>,
    /// Inclusive start.
    pub from: Option<DateTime<Utc>>,
    /// Exclusive end.
    pub to: Option<DateTime<Utc>>,
    pub splits: Vec<DateTime<Utc>>,
    pub weekdays_only: bool,
    pub power: Option<u32>,
    pub scale: Scale,
    pub policy: PartitionPolicy,
    pub include_full: bool,
    pub confidence: f64,
    pub alpha: f64,
    pub window: usize,
    pub step: usize,
    pub lag: Option<usize>,
    pub format: Option<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            frequencies: vec![Frequency::Day1],
            from: None,
            to: None,
            splits: Vec::new(),
            weekdays_only: false,
            power: None,
            scale: Scale::Percent,
            policy: PartitionPolicy::Halving,
            include_full: true,
            confidence: DEFAULT_CONFIDENCE,
            alpha: DEFAULT_ALPHA,
            window: DEFAULT_WINDOW,
            step: 1,
            lag: None,
            format: None,
        }
    }
}

impl RunConfig {
    pub fn rs_options(&self) -> RsOptions {
        RsOptions {
            include_full: self.include_full,
            ..RsOptions::with_policy(self.policy)
        }
    }

    pub fn format_or(&self, default: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(default)
    }

    /// The configured period, if any bound is set.
    pub fn period(&self) -> Option<PeriodSpec> {
        if self.from.is_none() && self.to.is_none() {
            return None;
        }
        let start = self.from.unwrap_or(DateTime::<Utc>::MIN_UTC);
        let end = self.to.unwrap_or(DateTime::<Utc>::MAX_UTC);
        PeriodSpec::new(start, end).ok()
    }

    /// The full period followed by the subperiods delimited by the splits.
    pub fn periods(&self) -> Vec<Option<PeriodSpec>> {
        let mut out = vec![self.period()];
        if self.splits.is_empty() {
            return out;
        }
        let mut bounds = vec![self.from.unwrap_or(DateTime::<Utc>::MIN_UTC)];
        bounds.extend(self.splits.iter().copied());
        bounds.push(self.to.unwrap_or(DateTime::<Utc>::MAX_UTC));
        for w in bounds.windows(2) {
            if let Ok(p) = PeriodSpec::new(w[0], w[1]) {
                out.push(Some(p));
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if self.inputs.is_empty() {
            return Err(usage("no inputs given (use --input ASSET=PATH)"));
        }
        let mut seen = std::collections::HashSet::new();
        for b in &self.inputs {
            if !seen.insert(b.asset.as_str()) {
                return Err(usage(format!("asset `{}` is bound twice", b.asset)));
            }
        }
        if self.frequencies.is_empty() {
            return Err(usage("no frequency selected"));
        }
        if let Some(q) = self.power {
            if q % 2 == 0 {
                return Err(usage(format!("--power must be an odd positive integer, got {q}")));
            }
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(usage(format!("--confidence must lie in (0, 1), got {}", self.confidence)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(usage(format!("--alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.step == 0 {
            return Err(usage("--step must be at least 1"));
        }
        if let (Some(a), Some(b)) = (self.from, self.to) {
            if a >= b {
                return Err(usage("--from must be earlier than --to"));
            }
        }
        for s in &self.splits {
            if self.from.is_some_and(|a| *s <= a) || self.to.is_some_and(|b| *s >= b) {
                return Err(usage(format!("split {s} is outside the analysis period")));
            }
        }
        Ok(())
    }
}

/// Parses a period bound. A bare `YYYY-MM-DD` used as an end bound covers
/// that whole day.
pub fn parse_bound(raw: &str, is_end: bool) -> Result<DateTime<Utc>, UsageError> {
    let raw = raw.trim();
    if let Ok(d) = NaiveDate::parse_from_str(raw, "%Y-%m-%d") {
        let start = d.and_hms_opt(0, 0, 0).expect("midnight").and_utc();
        return Ok(if is_end { start + Duration::days(1) } else { start });
    }
    parse_timestamp(raw)
        .filter(|_| raw.contains('-'))
        .ok_or_else(|| usage(format!("cannot parse date `{raw}`")))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    input: Option<Vec<String>>,
    freq: Option<Vec<String>>,
    from: Option<String>,
    to: Option<String>,
    split: Option<Vec<String>>,
    weekdays_only: Option<bool>,
    power: Option<u32>,
    scale: Option<String>,
    policy: Option<String>,
    exclude_full: Option<bool>,
    confidence: Option<f64>,
    alpha: Option<f64>,
    window: Option<usize>,
    step: Option<usize>,
    lag: Option<usize>,
    format: Option<String>,
}

fn load_file(path: &Path) -> Result<FileConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("invalid config {}: {e}", path.display())))
}

fn parse_with<T: std::str::FromStr>(raw: &str) -> Result<T, UsageError>
where
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e: T::Err| usage(e.to_string()))
}

/// Command-specific flags layered on top of [`CommonArgs`].
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub hurst: HurstOptionArgs,
    pub splits: Vec<String>,
    pub lag: Option<usize>,
    pub window: Option<usize>,
    pub step: Option<usize>,
}

/// Builds the run configuration: defaults, then the config file, then flags.
pub fn resolve(common: &CommonArgs, extra: &Overrides) -> Result<RunConfig, UsageError> {
    let file = match &common.config {
        Some(p) => load_file(p)?,
        None => FileConfig::default(),
    };
    let base = common.config.as_deref().and_then(Path::parent);
    let mut cfg = RunConfig::default();

    cfg.inputs = if !common.inputs.is_empty() {
        common.inputs.iter().map(|s| InputBinding::parse(s, None)).collect::<Result<_, _>>()?
    } else {
        file.input
            .unwrap_or_default()
            .iter()
            .map(|s| InputBinding::parse(s, base))
            .collect::<Result<_, _>>()?
    };

    cfg.frequencies = if !common.frequencies.is_empty() {
        common.frequencies.clone()
    } else if let Some(list) = &file.freq {
        list.iter().map(|s| parse_with::<Frequency>(s)).collect::<Result<_, _>>()?
    } else {
        cfg.frequencies
    };
    cfg.frequencies.sort();
    cfg.frequencies.dedup();

    if let Some(raw) = common.from.as_deref().or(file.from.as_deref()) {
        cfg.from = Some(parse_bound(raw, false)?);
    }
    if let Some(raw) = common.to.as_deref().or(file.to.as_deref()) {
        cfg.to = Some(parse_bound(raw, true)?);
    }
    let splits = if !extra.splits.is_empty() { extra.splits.clone() } else { file.split.unwrap_or_default() };
    cfg.splits = splits.iter().map(|s| parse_bound(s, false)).collect::<Result<_, _>>()?;
    cfg.splits.sort();
    cfg.splits.dedup();

    cfg.weekdays_only = common.weekdays_only || file.weekdays_only.unwrap_or(false);
    cfg.power = common.power.or(file.power);
    if let Some(s) = common.scale {
        cfg.scale = s;
    } else if let Some(s) = &file.scale {
        cfg.scale = parse_with(s)?;
    }
    if let Some(p) = extra.hurst.policy {
        cfg.policy = p;
    } else if let Some(p) = &file.policy {
        cfg.policy = parse_with(p)?;
    }
    cfg.include_full = !(extra.hurst.exclude_full || file.exclude_full.unwrap_or(false));
    cfg.confidence = extra.hurst.confidence.or(file.confidence).unwrap_or(cfg.confidence);
    cfg.alpha = extra.hurst.alpha.or(file.alpha).unwrap_or(cfg.alpha);
    cfg.window = extra.window.or(file.window).unwrap_or(cfg.window);
    cfg.step = extra.step.or(file.step).unwrap_or(cfg.step);
    cfg.lag = extra.lag.or(file.lag);
    cfg.format = match (common.format, &file.format) {
        (Some(f), _) => Some(f),
        (None, Some(f)) => Some(parse_with(f)?),
        (None, None) => None,
    };

    cfg.validate()?;
    Ok(cfg)
}
