//! Seeded synthetic series with known memory properties.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`, whose output stream is fixed across
//! platforms. Gaussian draws use `rand_distr::StandardNormal` (ziggurat).
//! The same seed therefore yields bit-identical series everywhere.
//!
//! Fractional Gaussian noise uses circulant embedding (Davies-Harte /
//! Dietrich-Newsam): the autocovariance sequence is embedded in a circulant
//! of size `2(n - 1)`, whose eigenvalues come from one FFT; scaling complex
//! Gaussian noise by their square roots and transforming again gives an
//! exact sample.

use std::str::FromStr;

use chrono::{DateTime, Duration, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Frequency, PricePoint, PriceSeries};
use crate::returns::{synthetic_epoch, ReturnPoint, ReturnSeries, Scale};

pub const MIN_LEN: usize = 16;
/// Most negative circulant eigenvalue tolerated before aborting.
pub const EIGENVALUE_TOLERANCE: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SynthKind {
    WhiteNoise,
    Fgn,
    /// Prices whose log returns are white noise.
    RandomWalkPrices,
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "white" | "white-noise" => Ok(SynthKind::WhiteNoise),
            "fgn" => Ok(SynthKind::Fgn),
            "walk" | "random-walk" => Ok(SynthKind::RandomWalkPrices),
            other => Err(Error::InvalidParameter {
                name: "kind",
                reason: format!("unknown generator `{other}` (expected white, fgn or walk)"),
            }),
        }
    }
}

/// Full description of a synthetic series. Identical specs give identical output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub kind: SynthKind,
    pub asset_id: String,
    pub n: usize,
    /// Hurst exponent; only used by [`SynthKind::Fgn`].
    pub h: f64,
    pub sigma: f64,
    pub seed: u64,
    pub frequency: Frequency,
    pub start: DateTime<Utc>,
    /// Scale of the generated return values.
    pub scale: Scale,
}

impl SynthSpec {
    pub fn new(kind: SynthKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            asset_id: "SYN".to_string(),
            n,
            h: 0.5,
            sigma: 1.0,
            seed,
            frequency: Frequency::Day1,
            start: synthetic_epoch(),
            scale: Scale::Raw,
        }
    }

    fn values(&self) -> Result<Vec<f64>> {
        match self.kind {
            SynthKind::WhiteNoise | SynthKind::RandomWalkPrices => white_noise_values(self.n, self.sigma, self.seed),
            SynthKind::Fgn => fgn_values(self.n, self.h, self.sigma, self.seed),
        }
    }

    /// Generated return series.
    pub fn returns(&self) -> Result<ReturnSeries> {
        let values = self.values()?;
        ReturnSeries::from_values_at(&self.asset_id, &values, self.scale, self.frequency, self.start)
    }

    /// Price path starting at `p0` one period before the first return.
    pub fn prices(&self, p0: f64) -> Result<PriceSeries> {
        random_walk_prices(&self.returns()?, p0)
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "sigma",
            reason: format!("{sigma} is not a positive finite number"),
        })
    }
}

fn white_noise_values(n: usize, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if n < MIN_LEN {
        return Err(Error::TooShort { needed: MIN_LEN, got: n });
    }
    check_sigma(sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect())
}

/// i.i.d. `N(0, sigma^2)` draws on a daily calendar, raw scale.
pub fn white_noise(n: usize, sigma: f64, seed: u64) -> Result<ReturnSeries> {
    let values = white_noise_values(n, sigma, seed)?;
    ReturnSeries::from_values("WN", &values, Scale::Raw)
}

/// Autocovariance of unit-variance fGn at lag `k`.
pub fn fgn_autocovariance(k: usize, h: f64) -> f64 {
    let k = k as f64;
    let two_h = 2.0 * h;
    0.5 * ((k + 1.0).powf(two_h) - 2.0 * k.powf(two_h) + (k - 1.0).abs().powf(two_h))
}

/// Eigenvalues of the circulant embedding of the unit-variance fGn covariance.
pub fn circulant_eigenvalues(n: usize, h: f64) -> Vec<f64> {
    let m = 2 * (n - 1);
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|j| {
            let lag = if j < n { j } else { m - j };
            Complex::new(fgn_autocovariance(lag, h), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    row.into_iter().map(|c| c.re).collect()
}

fn fgn_values(n: usize, h: f64, sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if n < MIN_LEN {
        return Err(Error::TooShort { needed: MIN_LEN, got: n });
    }
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::InvalidParameter {
            name: "h",
            reason: format!("{h} is not in (0, 1)"),
        });
    }
    check_sigma(sigma)?;

    let m = 2 * (n - 1);
    let eigen = circulant_eigenvalues(n, h);
    let min_eigenvalue = eigen.iter().copied().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < EIGENVALUE_TOLERANCE {
        return Err(Error::EmbeddingFailure { min_eigenvalue });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mf = m as f64;
    let mut buf: Vec<Complex<f64>> = eigen
        .iter()
        .map(|&lambda| {
            let w = (lambda.max(0.0) / mf).sqrt();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(w * re, w * im)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    Ok(buf[..n].iter().map(|c| sigma * c.re).collect())
}

/// Stationary fractional Gaussian noise with Hurst exponent `h`, raw scale.
pub fn fgn(n: usize, h: f64, sigma: f64, seed: u64) -> Result<ReturnSeries> {
    let values = fgn_values(n, h, sigma, seed)?;
    ReturnSeries::from_values("FGN", &values, Scale::Raw)
}

/// Integrates returns into prices: `P_t = P_{t-1} * exp(r_t / scale)`.
/// `P_0 = p0` is stamped one period before the first return.
pub fn random_walk_prices(returns: &ReturnSeries, p0: f64) -> Result<PriceSeries> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p0",
            reason: format!("{p0} is not a positive finite price"),
        });
    }
    let factor = returns.scale().factor();
    let step = Duration::seconds(returns.frequency().seconds());
    let first_ts = returns
        .points()
        .first()
        .map(|p| p.timestamp - step)
        .unwrap_or_else(synthetic_epoch);
    let mut points = Vec::with_capacity(returns.len() + 1);
    points.push(PricePoint { timestamp: first_ts, price: p0 });
    let mut price = p0;
    for &ReturnPoint { timestamp, value } in returns.points() {
        price *= (value / factor).exp();
        points.push(PricePoint { timestamp, price });
    }
    PriceSeries::new(returns.asset_id(), returns.frequency(), points)
}
