//! Rescaled-range (R/S) estimation of the Hurst exponent.
//!
//! The series is cut into `d` contiguous blocks of length `n` for a grid of
//! block lengths. Each block contributes `R/S`: the range of its cumulative
//! mean deviations over its standard deviation. The block average
//! `(R/S)_n` is regressed on `n` in log-log space; the slope is `H`, tested
//! against 0.5 with an OLS t-test on `k - 2` degrees of freedom.
//!
//! No small-sample expectation correction (Anis-Lloyd or similar) is applied,
//! so white noise typically estimates slightly above 0.5 on short grids.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::returns::ReturnSeries;

/// Smallest admissible block length (`n > 6`).
pub const MIN_BLOCK_LEN: usize = 7;
/// Smallest series accepted by [`rs_curve`].
pub const MIN_SERIES_LEN: usize = 16;
/// Regression points needed for a t-test with two residual degrees of freedom.
pub const MIN_SCALES: usize = 4;
pub const DEFAULT_CONFIDENCE: f64 = 0.99;
pub const DEFAULT_WINDOW: usize = 150;
pub const MIN_WINDOW: usize = 32;

// Standard errors below this are treated as an exact fit.
const EXACT_FIT_SE: f64 = 1e-12;

/// Grid of block lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionPolicy {
    /// `n = N, N/2, N/4, ...` (floor division), stopping before `n <= 6`.
    #[default]
    Halving,
    /// `n = floor(N/d)` for `d = 1, 2, 3, ...`, duplicates removed.
    Harmonic,
}

impl FromStr for PartitionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "halving" => Ok(PartitionPolicy::Halving),
            "harmonic" => Ok(PartitionPolicy::Harmonic),
            other => Err(Error::InvalidParameter {
                name: "policy",
                reason: format!("unknown partition policy `{other}` (expected halving or harmonic)"),
            }),
        }
    }
}

/// Divisor used for the block standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StdDivisor {
    /// Divide by `n` (classical R/S convention).
    #[default]
    Population,
    /// Divide by `n - 1`.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RsOptions {
    pub policy: PartitionPolicy,
    /// Keep the single-block point `n = N`.
    pub include_full: bool,
    pub std_divisor: StdDivisor,
}

impl Default for RsOptions {
    fn default() -> Self {
        Self {
            policy: PartitionPolicy::Halving,
            include_full: true,
            std_divisor: StdDivisor::Population,
        }
    }
}

impl RsOptions {
    pub fn with_policy(policy: PartitionPolicy) -> Self {
        Self { policy, ..Self::default() }
    }
}

/// Statistics of one block: mean, standard deviation and the range of the
/// cumulative deviations from the mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubseriesStat {
    pub index: usize,
    pub len: usize,
    pub mean: f64,
    pub std: f64,
    pub range: f64,
    /// Last cumulative deviation; zero up to rounding.
    pub final_deviation: f64,
}

impl SubseriesStat {
    /// `R/S`, or `None` for a zero-variance block.
    pub fn rescaled(&self) -> Option<f64> {
        (self.std > 0.0).then(|| self.range / self.std)
    }
}

fn block_stat(values: &[f64], index: usize, divisor: StdDivisor) -> SubseriesStat {
    let n = values.len();
    let first = values[0];
    if values.iter().all(|&v| v == first) {
        return SubseriesStat {
            index,
            len: n,
            mean: first,
            std: 0.0,
            range: 0.0,
            final_deviation: 0.0,
        };
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let mut cum = 0.0;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    let mut ss = 0.0;
    for &v in values {
        let z = v - mean;
        ss += z * z;
        cum += z;
        hi = hi.max(cum);
        lo = lo.min(cum);
    }
    let denom = match divisor {
        StdDivisor::Population => n as f64,
        StdDivisor::Sample => (n - 1) as f64,
    };
    SubseriesStat {
        index,
        len: n,
        mean,
        std: (ss / denom).sqrt(),
        range: hi - lo,
        final_deviation: cum,
    }
}

/// Rescaled-range statistics of a single block (population standard deviation).
///
/// # Panics
/// If `values` has fewer than two elements.
pub fn rescaled_range(values: &[f64]) -> SubseriesStat {
    assert!(values.len() >= 2, "rescaled_range needs at least two values");
    block_stat(values, 0, StdDivisor::Population)
}

/// Block lengths visited for a series of length `n_total`, descending.
pub fn scale_grid(n_total: usize, options: &RsOptions) -> Vec<usize> {
    let mut grid = Vec::new();
    match options.policy {
        PartitionPolicy::Halving => {
            let mut n = n_total;
            while n >= MIN_BLOCK_LEN {
                grid.push(n);
                n /= 2;
            }
        }
        PartitionPolicy::Harmonic => {
            for d in 1..=n_total {
                let n = n_total / d;
                if n < MIN_BLOCK_LEN {
                    break;
                }
                if grid.last() != Some(&n) {
                    grid.push(n);
                }
            }
        }
    }
    if !options.include_full {
        grid.retain(|&n| n != n_total);
    }
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsPoint {
    /// Block length.
    pub n: usize,
    /// Average `R/S` over the non-degenerate blocks.
    pub rs: f64,
    /// Number of blocks `d = floor(N / n)`.
    pub blocks: usize,
    /// Zero-variance blocks left out of the average.
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsCurve {
    /// Sorted by decreasing `n`.
    pub points: Vec<RsPoint>,
}

impl RsCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(ln n, ln (R/S)_n)` pairs.
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .map(|p| ((p.n as f64).ln(), p.rs.ln()))
            .collect()
    }
}

/// Computes `(R/S)_n` for every block length on the grid. Only the first
/// `d * n` observations are used for block length `n`; the tail is dropped.
pub fn rs_curve(values: &[f64], options: &RsOptions) -> Result<RsCurve> {
    let total = values.len();
    if total < MIN_SERIES_LEN {
        return Err(Error::TooShort { needed: MIN_SERIES_LEN, got: total });
    }
    let mut points = Vec::new();
    for n in scale_grid(total, options) {
        let blocks = total / n;
        let mut sum = 0.0;
        let mut used = 0usize;
        for (m, block) in values.chunks_exact(n).take(blocks).enumerate() {
            if let Some(rs) = block_stat(block, m, options.std_divisor).rescaled() {
                sum += rs;
                used += 1;
            }
        }
        if used == 0 {
            continue;
        }
        let rs = sum / used as f64;
        if rs > 0.0 && rs.is_finite() {
            points.push(RsPoint {
                n,
                rs,
                blocks,
                skipped: blocks - used,
            });
        }
    }
    if points.len() < MIN_SCALES {
        return Err(Error::TooFewScales { found: points.len() });
    }
    Ok(RsCurve { points })
}

/// Result of the log-log regression `ln (R/S)_n = ln c + H ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HurstEstimate {
    pub h: f64,
    pub log_c: f64,
    pub std_err: f64,
    /// `(h - 0.5) / std_err`.
    #[serde(with = "crate::float_serde")]
    pub t_stat: f64,
    /// Two-sided p-value of `H = 0.5`.
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub k_points: usize,
    /// `2 - h`.
    pub fractal_dimension: f64,
    /// Set when `h` falls outside `(0, 1)`; the value is reported unclamped.
    pub out_of_range: bool,
}

struct LineFit {
    slope: f64,
    intercept: f64,
    x_mean: f64,
    sxx: f64,
    resid_var: f64,
}

fn fit_line(points: &[(f64, f64)]) -> Result<LineFit> {
    let k = points.len() as f64;
    let x_mean = points.iter().map(|p| p.0).sum::<f64>() / k;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in points {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::DegenerateFit);
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ssr: f64 = points
        .iter()
        .map(|&(x, y)| {
            let e = y - intercept - slope * x;
            e * e
        })
        .sum();
    Ok(LineFit {
        slope,
        intercept,
        x_mean,
        sxx,
        resid_var: ssr / (k - 2.0),
    })
}

fn t_quantile(confidence: f64, df: usize) -> f64 {
    StudentsT::new(0.0, 1.0, df as f64)
        .expect("df >= 1")
        .inverse_cdf(0.5 + confidence / 2.0)
}

fn check_confidence(confidence: f64) -> Result<()> {
    if confidence > 0.0 && confidence < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "confidence",
            reason: format!("{confidence} is not in (0, 1)"),
        })
    }
}

/// OLS fit of the R/S curve in log-log space with a t-test of `H = 0.5`.
pub fn fit_hurst(curve: &RsCurve, confidence: f64) -> Result<HurstEstimate> {
    check_confidence(confidence)?;
    let k = curve.len();
    if k < MIN_SCALES {
        return Err(Error::TooFewScales { found: k });
    }
    let fit = fit_line(&curve.log_points())?;
    let h = fit.slope;
    let df = k - 2;
    let mut std_err = (fit.resid_var / fit.sxx).sqrt();
    if std_err < EXACT_FIT_SE {
        std_err = 0.0;
    }
    let diff = h - 0.5;
    let (t_stat, p_value) = if std_err == 0.0 {
        if diff.abs() < EXACT_FIT_SE {
            (0.0, 1.0)
        } else {
            (f64::INFINITY.copysign(diff), 0.0)
        }
    } else {
        let t = diff / std_err;
        let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 2");
        (t, (2.0 * dist.sf(t.abs())).min(1.0))
    };
    let half_width = t_quantile(confidence, df) * std_err;
    Ok(HurstEstimate {
        h,
        log_c: fit.intercept,
        std_err,
        t_stat,
        p_value,
        ci_low: h - half_width,
        ci_high: h + half_width,
        confidence,
        k_points: k,
        fractal_dimension: 2.0 - h,
        out_of_range: !(h > 0.0 && h < 1.0),
    })
}

/// [`rs_curve`] followed by [`fit_hurst`].
pub fn hurst(values: &[f64], options: &RsOptions, confidence: f64) -> Result<HurstEstimate> {
    check_confidence(confidence)?;
    fit_hurst(&rs_curve(values, options)?, confidence)
}

/// Curve point together with the fitted line and its confidence band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint {
    pub n: usize,
    pub log_n: f64,
    pub log_rs: f64,
    pub fitted: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Pointwise confidence band of the regression line at each curve point.
pub fn regression_band(curve: &RsCurve, confidence: f64) -> Result<Vec<BandPoint>> {
    check_confidence(confidence)?;
    if curve.len() < MIN_SCALES {
        return Err(Error::TooFewScales { found: curve.len() });
    }
    let logs = curve.log_points();
    let fit = fit_line(&logs)?;
    let k = logs.len() as f64;
    let tq = t_quantile(confidence, logs.len() - 2);
    let s = fit.resid_var.sqrt();
    Ok(curve
        .points
        .iter()
        .zip(&logs)
        .map(|(p, &(x, y))| {
            let fitted = fit.intercept + fit.slope * x;
            let half = tq * s * (1.0 / k + (x - fit.x_mean).powi(2) / fit.sxx).sqrt();
            BandPoint {
                n: p.n,
                log_n: x,
                log_rs: y,
                fitted,
                lower: fitted - half,
                upper: fitted + half,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemoryClass {
    /// `H = 0.5` not rejected: independent increments.
    Efficient,
    /// `H < 0.5`: mean reverting.
    AntiPersistent,
    /// `H > 0.5`: long memory.
    Persistent,
}

impl MemoryClass {
    pub fn as_str(self) -> &'static str {
        match self {
            MemoryClass::Efficient => "efficient",
            MemoryClass::AntiPersistent => "anti-persistent",
            MemoryClass::Persistent => "persistent",
        }
    }
}

impl fmt::Display for MemoryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: MemoryClass,
    pub h: f64,
    pub p_value: f64,
    pub alpha: f64,
}

pub fn classify_values(h: f64, p_value: f64, alpha: f64) -> Classification {
    let class = if p_value >= alpha {
        MemoryClass::Efficient
    } else if h > 0.5 {
        MemoryClass::Persistent
    } else if h < 0.5 {
        MemoryClass::AntiPersistent
    } else {
        MemoryClass::Efficient
    };
    Classification { class, h, p_value, alpha }
}

/// Memory regime at significance level `alpha`.
pub fn classify(estimate: &HurstEstimate, alpha: f64) -> Classification {
    classify_values(estimate.h, estimate.p_value, alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RollingPoint {
    pub timestamp: DateTime<Utc>,
    /// `None` where the window had too few usable scales.
    pub estimate: Option<HurstEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingHurst {
    pub window: usize,
    pub step: usize,
    pub points: Vec<RollingPoint>,
}

/// Hurst estimates over sliding windows, stamped with each window's last
/// timestamp. Produces `floor((N - window) / step) + 1` points.
pub fn rolling_hurst(
    returns: &ReturnSeries,
    window: usize,
    step: usize,
    options: &RsOptions,
    confidence: f64,
) -> Result<RollingHurst> {
    if window < MIN_WINDOW {
        return Err(Error::InvalidParameter {
            name: "window",
            reason: format!("{window} is below the minimum of {MIN_WINDOW}"),
        });
    }
    if step == 0 {
        return Err(Error::InvalidParameter {
            name: "step",
            reason: "must be at least 1".to_string(),
        });
    }
    check_confidence(confidence)?;
    let total = returns.len();
    if total < window {
        return Err(Error::TooShort { needed: window, got: total });
    }
    let values = returns.values();
    let pts = returns.points();
    let starts: Vec<usize> = (0..=total - window).step_by(step).collect();
    let points = starts
        .par_iter()
        .map(|&s| {
            let estimate = match hurst(&values[s..s + window], options, confidence) {
                Ok(e) => Some(e),
                Err(Error::TooFewScales { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(RollingPoint {
                timestamp: pts[s + window - 1].timestamp,
                estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RollingHurst { window, step, points })
}
