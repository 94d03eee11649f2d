//! Augmented Dickey-Fuller unit-root test, constant and no trend.
//!
//! p-values use MacKinnon's asymptotic response surface for the `c`
//! (constant-only, one variable) case: MacKinnon, J.G. (1994) "Approximate
//! asymptotic distribution functions for unit-root and cointegration tests",
//! JBES 12, 167-176, with the coefficient set later distributed with
//! MacKinnon (2010) and reproduced in statsmodels' `adfvalues`.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use super::TestResult;
use crate::error::{Error, Result};

// Response-surface coefficients, constant-only regression, N = 1.
const TAU_MAX: f64 = 2.74;
const TAU_MIN: f64 = -18.83;
const TAU_STAR: f64 = -1.61;
const SMALL_P: [f64; 3] = [2.1659, 1.4412, 3.8269e-2];
const LARGE_P: [f64; 4] = [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2];

/// `floor((n - 1)^(1/3))`, the default lag order.
pub fn default_adf_lag(n: usize) -> Result<usize> {
    if n < 10 {
        return Err(Error::TooShort { needed: 10, got: n });
    }
    let target = n - 1;
    let mut k = (target as f64).cbrt().floor() as usize;
    while (k + 1).pow(3) <= target {
        k += 1;
    }
    while k.pow(3) > target {
        k -= 1;
    }
    Ok(k)
}

/// Asymptotic left-tail p-value of the ADF t-statistic.
pub fn mackinnon_p_value(tau: f64) -> f64 {
    if tau.is_nan() {
        return f64::NAN;
    }
    if tau > TAU_MAX {
        return 1.0;
    }
    if tau < TAU_MIN {
        return 0.0;
    }
    let coef: &[f64] = if tau <= TAU_STAR { &SMALL_P } else { &LARGE_P };
    let z = coef.iter().rev().fold(0.0, |acc, c| acc * tau + c);
    Normal::standard().cdf(z)
}

/// Fitted ADF regression `dy_t = a + g*y_{t-1} + sum b_i*dy_{t-i} + e_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdfRegression {
    pub lag: usize,
    pub nobs: usize,
    /// Coefficients in order: constant, `y_{t-1}`, lagged differences.
    pub coefficients: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub ssr: f64,
}

impl AdfRegression {
    pub fn fit(values: &[f64], lag: usize) -> Result<Self> {
        let n = values.len();
        let needed = lag + 10;
        if n < needed {
            return Err(Error::TooShort { needed, got: n });
        }
        let dy: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let k = lag + 2;
        let nobs = dy.len() - lag;
        if nobs <= k {
            return Err(Error::TooShort { needed: 2 * lag + 4, got: n });
        }

        let design = DMatrix::from_fn(nobs, k, |row, col| {
            let t = row + lag;
            match col {
                0 => 1.0,
                1 => values[t],
                c => dy[t - (c - 1)],
            }
        });
        let target = DVector::from_iterator(nobs, dy[lag..].iter().copied());

        let qr = design.clone().qr();
        let r = qr.r();
        let scale = r.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if r.diagonal().iter().any(|v| v.abs() <= 1e-10 * scale) {
            return Err(Error::SingularRegression);
        }
        let qty = qr.q().transpose() * &target;
        let beta = r.solve_upper_triangular(&qty).ok_or(Error::SingularRegression)?;
        let r_inv = r
            .solve_upper_triangular(&DMatrix::identity(k, k))
            .ok_or(Error::SingularRegression)?;

        let resid = &target - &design * &beta;
        let ssr = resid.norm_squared();
        let sigma2 = ssr / (nobs - k) as f64;
        let std_errors = (0..k)
            .map(|i| (sigma2 * r_inv.row(i).norm_squared()).sqrt())
            .collect();

        Ok(Self {
            lag,
            nobs,
            coefficients: beta.iter().copied().collect(),
            std_errors,
            ssr,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.coefficients[1]
    }

    pub fn t_statistic(&self) -> f64 {
        self.coefficients[1] / self.std_errors[1]
    }
}

/// ADF test of the unit-root null. `lag` defaults to [`default_adf_lag`].
pub fn adf_test(values: &[f64], lag: Option<usize>) -> Result<TestResult> {
    let lag = match lag {
        Some(l) => l,
        None => default_adf_lag(values.len())?,
    };
    let fit = AdfRegression::fit(values, lag)?;
    let tau = fit.t_statistic();
    Ok(TestResult::new(tau, mackinnon_p_value(tau), lag))
}
