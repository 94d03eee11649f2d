//! Command implementations. Each command turns a [`RunConfig`] into rendered
//! text plus the per-asset failures that determine the exit status.

use std::fs::File;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::format::{self, fixed, json, p_value, starred, starred_value, OutputFormat, Table};
use crate::error::{Error, Result};
use crate::hurst::{classify, fit_hurst, regression_band, rolling_hurst, rs_curve, HurstEstimate, MemoryClass, RollingHurst, RsCurve};
use crate::ingest::{filter_weekdays, parse_price_csv, resample, slice_period, CsvSchema, Frequency, PeriodSpec, PriceSeries};
use crate::returns::{log_returns, power_transform, ReturnSeries};
use crate::stats::{adf_test, correlation_matrix, describe, jarque_bera, CorrelationMatrix, DescriptiveStats, TestResult};

/// An asset that could not be processed at some stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub asset: String,
    pub frequency: Option<Frequency>,
    pub stage: String,
    pub message: String,
}

impl Failure {
    fn new(asset: &str, frequency: Option<Frequency>, stage: &str, err: &Error) -> Self {
        Self {
            asset: asset.to_string(),
            frequency,
            stage: stage.to_string(),
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub failures: Vec<Failure>,
    pub warnings: Vec<String>,
}

/// Price series of one input binding, or why it could not be read.
#[derive(Debug, Clone)]
pub struct LoadedAsset {
    pub asset: String,
    pub prices: Result<PriceSeries>,
}

pub fn load_inputs(cfg: &RunConfig) -> Vec<LoadedAsset> {
    cfg.inputs
        .par_iter()
        .map(|b| {
            let prices = File::open(&b.path)
                .map_err(|e| Error::Io(format!("{}: {e}", b.path.display())))
                .and_then(|f| parse_price_csv(f, &CsvSchema::default(), &b.asset));
            LoadedAsset { asset: b.asset.clone(), prices }
        })
        .collect()
}

/// Returns of one asset at one frequency over one period.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub returns: ReturnSeries,
    /// `first -- last` observation dates.
    pub period: String,
}

/// resample, slice, weekday filter, log returns, then the optional power.
pub fn prepare(prices: &PriceSeries, freq: Frequency, period: Option<&PeriodSpec>, cfg: &RunConfig) -> Result<Prepared> {
    let mut series = resample(prices, freq)?;
    if let Some(p) = period {
        series = slice_period(&series, p);
    }
    if cfg.weekdays_only {
        series = filter_weekdays(&series);
    }
    let points = series.points();
    if points.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: points.len() });
    }
    let label = format!(
        "{} -- {}",
        points[0].timestamp.format("%Y-%m-%d"),
        points[points.len() - 1].timestamp.format("%Y-%m-%d")
    );
    let mut returns = log_returns(&series, cfg.scale)?;
    if let Some(q) = cfg.power {
        returns = power_transform(&returns, q)?;
    }
    Ok(Prepared { returns, period: label })
}

fn jobs<'a>(loaded: &'a [LoadedAsset], cfg: &RunConfig) -> Vec<(&'a LoadedAsset, Frequency)> {
    loaded
        .iter()
        .flat_map(|a| cfg.frequencies.iter().map(move |&f| (a, f)))
        .collect()
}

fn prepared_for(asset: &LoadedAsset, freq: Frequency, period: Option<&PeriodSpec>, cfg: &RunConfig) -> Result<Prepared> {
    match &asset.prices {
        Ok(p) => prepare(p, freq, period, cfg),
        Err(e) => Err(e.clone()),
    }
}

fn render_rows<T: Serialize>(rows: &[T], table: impl FnOnce() -> Table, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => json(&rows),
        other => table().render(other),
    }
}

fn error_cells(width: usize, leading: Vec<String>, err: &str) -> Vec<String> {
    let mut row = leading;
    while row.len() < width - 1 {
        row.push(String::new());
    }
    row.push(format!("error: {err}"));
    row
}

// ---- stats ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub asset: String,
    pub frequency: Frequency,
    pub stats: Option<DescriptiveStats>,
    pub jarque_bera: Option<TestResult>,
    pub error: Option<String>,
}

pub const STATS_HEADERS: [&str; 11] =
    ["Asset", "Freq", "N", "Mean", "Median", "Std.", "Max.", "Min.", "Skew.", "Kurt.", "J. Bera"];

pub fn stats_rows(loaded: &[LoadedAsset], cfg: &RunConfig) -> (Vec<StatsRow>, Vec<Failure>) {
    let period = cfg.period();
    let results: Vec<(StatsRow, Option<Failure>)> = jobs(loaded, cfg)
        .par_iter()
        .map(|&(a, freq)| {
            let computed = prepared_for(a, freq, period.as_ref(), cfg).and_then(|p| {
                let v = p.returns.values();
                Ok((describe(&v)?, jarque_bera(&v)?))
            });
            match computed {
                Ok((s, jb)) => (
                    StatsRow { asset: a.asset.clone(), frequency: freq, stats: Some(s), jarque_bera: Some(jb), error: None },
                    None,
                ),
                Err(e) => (
                    StatsRow {
                        asset: a.asset.clone(),
                        frequency: freq,
                        stats: None,
                        jarque_bera: None,
                        error: Some(e.to_string()),
                    },
                    Some(Failure::new(&a.asset, Some(freq), "stats", &e)),
                ),
            }
        })
        .collect();
    results.into_iter().unzip_failures()
}

pub fn stats_table(rows: &[StatsRow]) -> Table {
    let mut t = Table::new(&STATS_HEADERS);
    for r in rows {
        let lead = vec![r.asset.clone(), r.frequency.to_string()];
        match (&r.stats, &r.jarque_bera, &r.error) {
            (Some(s), Some(jb), _) => t.push(
                lead.into_iter()
                    .chain([
                        s.n.to_string(),
                        fixed(s.mean, 4),
                        fixed(s.median, 4),
                        fixed(s.std, 4),
                        fixed(s.max, 4),
                        fixed(s.min, 4),
                        fixed(s.skewness, 4),
                        fixed(s.kurtosis, 4),
                        starred(jb),
                    ])
                    .collect(),
            ),
            (_, _, err) => t.push(error_cells(STATS_HEADERS.len(), lead, err.as_deref().unwrap_or("unknown"))),
        }
    }
    t
}

pub fn cmd_stats(cfg: &RunConfig) -> CommandOutput {
    let loaded = load_inputs(cfg);
    let (rows, failures) = stats_rows(&loaded, cfg);
    CommandOutput {
        text: render_rows(&rows, || stats_table(&rows), cfg.format_or(OutputFormat::Md)),
        failures,
        warnings: Vec::new(),
    }
}

// ---- adf ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfRow {
    pub asset: String,
    pub frequency: Frequency,
    pub n: usize,
    pub result: Option<TestResult>,
    pub error: Option<String>,
}

pub const ADF_HEADERS: [&str; 6] = ["Asset", "Freq", "N", "Lag", "ADF", "p-value"];

pub fn adf_rows(loaded: &[LoadedAsset], cfg: &RunConfig) -> (Vec<AdfRow>, Vec<Failure>) {
    let period = cfg.period();
    let results: Vec<(AdfRow, Option<Failure>)> = jobs(loaded, cfg)
        .par_iter()
        .map(|&(a, freq)| {
            let prepared = prepared_for(a, freq, period.as_ref(), cfg);
            let n = prepared.as_ref().map(|p| p.returns.len()).unwrap_or(0);
            match prepared.and_then(|p| adf_test(&p.returns.values(), cfg.lag)) {
                Ok(res) => (
                    AdfRow { asset: a.asset.clone(), frequency: freq, n, result: Some(res), error: None },
                    None,
                ),
                Err(e) => (
                    AdfRow { asset: a.asset.clone(), frequency: freq, n, result: None, error: Some(e.to_string()) },
                    Some(Failure::new(&a.asset, Some(freq), "adf", &e)),
                ),
            }
        })
        .collect();
    results.into_iter().unzip_failures()
}

pub fn adf_table(rows: &[AdfRow]) -> Table {
    let mut t = Table::new(&ADF_HEADERS);
    for r in rows {
        let lead = vec![r.asset.clone(), r.frequency.to_string(), r.n.to_string()];
        match &r.result {
            Some(res) => t.push(
                lead.into_iter()
                    .chain([res.df_or_lag.to_string(), starred(res), p_value(res.p_value)])
                    .collect(),
            ),
            None => t.push(error_cells(ADF_HEADERS.len(), lead, r.error.as_deref().unwrap_or("unknown"))),
        }
    }
    t
}

pub fn cmd_adf(cfg: &RunConfig) -> CommandOutput {
    let loaded = load_inputs(cfg);
    let (rows, failures) = adf_rows(&loaded, cfg);
    CommandOutput {
        text: render_rows(&rows, || adf_table(&rows), cfg.format_or(OutputFormat::Md)),
        failures,
        warnings: Vec::new(),
    }
}

// ---- hurst ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstRow {
    pub asset: String,
    pub frequency: Frequency,
    pub period: String,
    pub n: usize,
    pub estimate: Option<HurstEstimate>,
    pub class: Option<MemoryClass>,
    pub warning: Option<String>,
    pub error: Option<String>,
}

pub const HURST_HEADERS: [&str; 10] =
    ["Asset", "Freq", "Period", "N", "Hurst", "p-value", "CI low", "CI high", "D", "Class"];

pub const CURVE_HEADERS: [&str; 10] = ["asset", "freq", "period", "n", "log_n", "log_rs", "fitted", "lower", "upper", "blocks"];

/// Hurst rows for every asset, frequency and period, with the R/S curves
/// behind each successful estimate.
pub fn hurst_rows(loaded: &[LoadedAsset], cfg: &RunConfig) -> (Vec<HurstRow>, Vec<Option<RsCurve>>, Vec<Failure>) {
    let periods = cfg.periods();
    let mut work = Vec::new();
    for a in loaded {
        for &freq in &cfg.frequencies {
            for p in &periods {
                work.push((a, freq, *p));
            }
        }
    }
    let opts = cfg.rs_options();
    let results: Vec<(HurstRow, Option<RsCurve>, Option<Failure>)> = work
        .par_iter()
        .map(|&(a, freq, period)| {
            let mut row = HurstRow {
                asset: a.asset.clone(),
                frequency: freq,
                period: String::new(),
                n: 0,
                estimate: None,
                class: None,
                warning: None,
                error: None,
            };
            let prepared = match prepared_for(a, freq, period.as_ref(), cfg) {
                Ok(p) => p,
                Err(e) => {
                    row.error = Some(e.to_string());
                    return (row, None, Some(Failure::new(&a.asset, Some(freq), "hurst", &e)));
                }
            };
            row.period = prepared.period;
            row.n = prepared.returns.len();
            let fitted = rs_curve(&prepared.returns.values(), &opts)
                .and_then(|c| fit_hurst(&c, cfg.confidence).map(|e| (c, e)));
            match fitted {
                Ok((curve, est)) => {
                    row.class = Some(classify(&est, cfg.alpha).class);
                    if est.out_of_range {
                        row.warning = Some(format!("h = {} lies outside (0, 1)", est.h));
                    }
                    row.estimate = Some(est);
                    (row, Some(curve), None)
                }
                Err(e @ Error::TooFewScales { .. }) => {
                    row.warning = Some(e.to_string());
                    (row, None, None)
                }
                Err(e) => {
                    row.error = Some(e.to_string());
                    (row, None, Some(Failure::new(&a.asset, Some(freq), "hurst", &e)))
                }
            }
        })
        .collect();
    let mut rows = Vec::new();
    let mut curves = Vec::new();
    let mut failures = Vec::new();
    for (r, c, f) in results {
        rows.push(r);
        curves.push(c);
        failures.extend(f);
    }
    (rows, curves, failures)
}

pub fn hurst_table(rows: &[HurstRow]) -> Table {
    let mut t = Table::new(&HURST_HEADERS);
    for r in rows {
        let lead = vec![r.asset.clone(), r.frequency.to_string(), r.period.clone(), r.n.to_string()];
        match (&r.estimate, &r.class) {
            (Some(e), Some(c)) => {
                let class = match &r.warning {
                    Some(w) => format!("{c} (warning: {w})"),
                    None => c.to_string(),
                };
                t.push(
                    lead.into_iter()
                        .chain([
                            fixed(e.h, 5),
                            p_value(e.p_value),
                            fixed(e.ci_low, 5),
                            fixed(e.ci_high, 5),
                            fixed(e.fractal_dimension, 5),
                            class,
                        ])
                        .collect(),
                )
            }
            _ => match (&r.warning, &r.error) {
                (Some(w), None) => {
                    let mut row = lead;
                    row.extend(std::iter::repeat_n(String::new(), 5));
                    row.push(format!("warning: {w}"));
                    t.push(row)
                }
                (_, err) => t.push(error_cells(HURST_HEADERS.len(), lead, err.as_deref().unwrap_or("unknown"))),
            },
        }
    }
    t
}

/// CSV of `(n, ln n, ln R/S)` with the fitted line and its confidence band.
pub fn curve_csv(rows: &[HurstRow], curves: &[Option<RsCurve>], confidence: f64) -> Result<String> {
    let mut t = Table::new(&CURVE_HEADERS);
    for (row, curve) in rows.iter().zip(curves) {
        let Some(curve) = curve else { continue };
        let band = regression_band(curve, confidence)?;
        for (b, p) in band.iter().zip(&curve.points) {
            t.push(vec![
                row.asset.clone(),
                row.frequency.to_string(),
                row.period.clone(),
                b.n.to_string(),
                b.log_n.to_string(),
                b.log_rs.to_string(),
                b.fitted.to_string(),
                b.lower.to_string(),
                b.upper.to_string(),
                p.blocks.to_string(),
            ]);
        }
    }
    Ok(t.csv())
}

/// Rendered Hurst table and the curve CSV.
pub fn cmd_hurst(cfg: &RunConfig) -> (CommandOutput, String) {
    let loaded = load_inputs(cfg);
    let (rows, curves, mut failures) = hurst_rows(&loaded, cfg);
    let warnings = rows
        .iter()
        .filter_map(|r| r.warning.as_ref().map(|w| format!("{} {} {}: {w}", r.asset, r.frequency, r.period)))
        .collect();
    let curves_text = match curve_csv(&rows, &curves, cfg.confidence) {
        Ok(s) => s,
        Err(e) => {
            failures.push(Failure::new("*", None, "curve", &e));
            String::new()
        }
    };
    let out = CommandOutput {
        text: render_rows(&rows, || hurst_table(&rows), cfg.format_or(OutputFormat::Md)),
        failures,
        warnings,
    };
    (out, curves_text)
}

// ---- rolling ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingResult {
    pub asset: String,
    pub frequency: Frequency,
    pub rolling: Option<RollingHurst>,
    pub error: Option<String>,
}

pub fn rolling_results(loaded: &[LoadedAsset], cfg: &RunConfig) -> (Vec<RollingResult>, Vec<Failure>) {
    let period = cfg.period();
    let opts = cfg.rs_options();
    // Windows are already evaluated in parallel inside rolling_hurst.
    let results: Vec<(RollingResult, Option<Failure>)> = jobs(loaded, cfg)
        .iter()
        .map(|&(a, freq)| {
            let computed = prepared_for(a, freq, period.as_ref(), cfg)
                .and_then(|p| rolling_hurst(&p.returns, cfg.window, cfg.step, &opts, cfg.confidence));
            match computed {
                Ok(r) => (RollingResult { asset: a.asset.clone(), frequency: freq, rolling: Some(r), error: None }, None),
                Err(e) => (
                    RollingResult { asset: a.asset.clone(), frequency: freq, rolling: None, error: Some(e.to_string()) },
                    Some(Failure::new(&a.asset, Some(freq), "rolling", &e)),
                ),
            }
        })
        .collect();
    results.into_iter().unzip_failures()
}

/// `timestamp,h,ci_low,ci_high`; windows without an estimate leave the
/// numeric fields empty.
pub fn rolling_table(r: &RollingHurst) -> Table {
    let mut t = Table::new(&["timestamp", "h", "ci_low", "ci_high"]);
    for p in &r.points {
        let ts = format::timestamp(p.timestamp);
        match &p.estimate {
            Some(e) => t.push(vec![ts, fixed(e.h, 5), fixed(e.ci_low, 5), fixed(e.ci_high, 5)]),
            None => t.push(vec![ts, String::new(), String::new(), String::new()]),
        }
    }
    t
}

pub fn cmd_rolling(cfg: &RunConfig) -> CommandOutput {
    let loaded = load_inputs(cfg);
    let (results, failures) = rolling_results(&loaded, cfg);
    let format = cfg.format_or(OutputFormat::Csv);
    let text = if format == OutputFormat::Json {
        json(&results)
    } else {
        let single = results.len() == 1;
        let mut text = String::new();
        for r in &results {
            let Some(rolling) = &r.rolling else { continue };
            if !single {
                text.push_str(&format!("# {} {}\n", r.asset, r.frequency));
            }
            text.push_str(&rolling_table(rolling).render(format));
        }
        text
    };
    CommandOutput { text, failures, warnings: Vec::new() }
}

// ---- corr ----

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrResult {
    pub frequency: Frequency,
    pub matrix: Option<CorrelationMatrix>,
    pub error: Option<String>,
}

pub fn corr_results(loaded: &[LoadedAsset], cfg: &RunConfig) -> (Vec<CorrResult>, Vec<Failure>, Vec<String>) {
    let period = cfg.period();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    let mut warnings = Vec::new();
    for &freq in &cfg.frequencies {
        let prepared: Vec<(&LoadedAsset, Result<Prepared>)> = loaded
            .par_iter()
            .map(|a| (a, prepared_for(a, freq, period.as_ref(), cfg)))
            .collect();
        let mut series = Vec::new();
        for (a, p) in prepared {
            match p {
                Ok(p) => series.push(p.returns),
                Err(e) => failures.push(Failure::new(&a.asset, Some(freq), "corr", &e)),
            }
        }
        match correlation_matrix(&series) {
            Ok(m) => {
                for f in &m.failures {
                    warnings.push(format!(
                        "{freq} {} / {}: {}",
                        m.asset_ids[f.row], m.asset_ids[f.col], f.reason
                    ));
                }
                results.push(CorrResult { frequency: freq, matrix: Some(m), error: None });
            }
            Err(e) => {
                failures.push(Failure::new("*", Some(freq), "corr", &e));
                results.push(CorrResult { frequency: freq, matrix: None, error: Some(e.to_string()) });
            }
        }
    }
    (results, failures, warnings)
}

/// Lower triangle with stars; blank where a pair could not be computed.
pub fn corr_table(m: &CorrelationMatrix) -> Table {
    let mut headers = vec![String::new()];
    headers.extend(m.asset_ids.iter().cloned());
    let mut t = Table::new(&headers);
    for i in 0..m.size() {
        let mut row = vec![m.asset_ids[i].clone()];
        for j in 0..m.size() {
            row.push(if j > i {
                String::new()
            } else if j == i {
                "1".to_string()
            } else {
                match m.get(i, j) {
                    Some(c) => starred_value(c.r, 3, c.result.stars),
                    None => String::new(),
                }
            });
        }
        t.push(row);
    }
    t
}

pub fn render_corr(results: &[CorrResult], format: OutputFormat) -> String {
    if format == OutputFormat::Json {
        return json(&results);
    }
    let mut text = String::new();
    for r in results {
        let Some(m) = &r.matrix else { continue };
        match format {
            OutputFormat::Csv => text.push_str(&format!("# {}\n", r.frequency)),
            _ => text.push_str(&format!("Frequency: {}\n\n", r.frequency)),
        }
        text.push_str(&corr_table(m).render(format));
        if format == OutputFormat::Md {
            text.push('\n');
        }
    }
    text
}

pub fn cmd_corr(cfg: &RunConfig) -> CommandOutput {
    let loaded = load_inputs(cfg);
    let (results, failures, warnings) = corr_results(&loaded, cfg);
    CommandOutput {
        text: render_corr(&results, cfg.format_or(OutputFormat::Md)),
        failures,
        warnings,
    }
}

trait UnzipFailures<R> {
    fn unzip_failures(self) -> (Vec<R>, Vec<Failure>);
}

impl<R, I: Iterator<Item = (R, Option<Failure>)>> UnzipFailures<R> for I {
    fn unzip_failures(self) -> (Vec<R>, Vec<Failure>) {
        let mut rows = Vec::new();
        let mut failures = Vec::new();
        for (r, f) in self {
            rows.push(r);
            failures.extend(f);
        }
        (rows, failures)
    }
}
