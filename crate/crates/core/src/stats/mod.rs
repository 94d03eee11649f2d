//! Descriptive statistics and the hypothesis tests run on return series.

mod adf;
mod correlation;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use adf::{adf_test, default_adf_lag, mackinnon_p_value, AdfRegression};
pub use correlation::{correlation_matrix, pearson, CorrelationCell, CorrelationMatrix};

/// Significance marker: `*` p < 0.05, `**` p < 0.01, `***` p < 0.001.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stars {
    None,
    S5,
    S1,
    S01,
}

impl Stars {
    pub fn from_p(p: f64) -> Self {
        if p < 0.001 {
            Stars::S01
        } else if p < 0.01 {
            Stars::S1
        } else if p < 0.05 {
            Stars::S5
        } else {
            Stars::None
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stars::None => "",
            Stars::S5 => "*",
            Stars::S1 => "**",
            Stars::S01 => "***",
        }
    }
}

impl fmt::Display for Stars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Statistic, p-value and stars of a single test. `df_or_lag` holds the
/// degrees of freedom (JB, Pearson) or the ADF lag order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    #[serde(with = "crate::float_serde")]
    pub statistic: f64,
    pub p_value: f64,
    pub stars: Stars,
    pub df_or_lag: usize,
}

impl TestResult {
    pub fn new(statistic: f64, p_value: f64, df_or_lag: usize) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        Self {
            statistic,
            p_value,
            stars: Stars::from_p(p_value),
            df_or_lag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (divisor n - 1).
    pub std: f64,
    pub max: f64,
    pub min: f64,
    /// m3 / m2^1.5 with population central moments.
    pub skewness: f64,
    /// Non-excess kurtosis m4 / m2^2; 3 for a normal sample.
    pub kurtosis: f64,
}

pub fn describe(values: &[f64]) -> Result<DescriptiveStats> {
    let n = values.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    // Central sums; m_k = s_k / n.
    let (mut s2, mut s3, mut s4) = (0.0, 0.0, 0.0);
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    if s2 <= 0.0 {
        return Err(Error::ZeroVariance);
    }

    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };

    Ok(DescriptiveStats {
        n,
        mean,
        median,
        std: (s2 / (nf - 1.0)).sqrt(),
        max: sorted[n - 1],
        min: sorted[0],
        skewness: nf.sqrt() * s3 / s2.powf(1.5),
        kurtosis: nf * s4 / (s2 * s2),
    })
}

/// Jarque-Bera normality test, `(n/6)(S^2 + (K-3)^2/4)` against chi-square(2).
pub fn jarque_bera(values: &[f64]) -> Result<TestResult> {
    if values.len() < 8 {
        return Err(Error::TooShort { needed: 8, got: values.len() });
    }
    let d = describe(values)?;
    let excess = d.kurtosis - 3.0;
    let statistic = (d.n as f64 / 6.0) * (d.skewness * d.skewness + 0.25 * excess * excess);
    // Chi-square with 2 degrees of freedom has survival function exp(-x/2).
    Ok(TestResult::new(statistic, (-0.5 * statistic).exp(), 2))
}
