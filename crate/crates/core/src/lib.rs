//! Rescaled-range (R/S) fractal analysis of financial return series.
//!
//! The pipeline runs from raw opening prices ([`ingest`]) to log returns
//! ([`returns`]), preliminary tests ([`stats`]: descriptive statistics,
//! Jarque-Bera, ADF, Pearson), and Hurst exponent estimation with a slope
//! t-test ([`hurst`]). [`synth`] provides seeded white noise and fractional
//! Gaussian noise with known memory for validation. [`cli`] holds the
//! command implementations behind the `fractalis` binary.

pub mod cli;
pub mod error;
pub(crate) mod float_serde;
pub mod hurst;
pub mod ingest;
pub mod returns;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
pub use hurst::{
    classify, fit_hurst, hurst, rescaled_range, rolling_hurst, rs_curve, HurstEstimate, MemoryClass,
    PartitionPolicy, RsCurve, RsOptions,
};
pub use ingest::{Frequency, PeriodSpec, PriceSeries};
pub use returns::{log_returns, power_transform, ReturnSeries, Scale};
