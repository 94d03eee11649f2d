//! Log returns and odd-power return transforms.

use chrono::{DateTime, Duration, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{Frequency, PriceSeries};

/// Unit of a return series. `Percent` is `100 * ln(P_t / P_{t-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Percent,
    Raw,
}

impl Scale {
    pub fn factor(self) -> f64 {
        match self {
            Scale::Percent => 100.0,
            Scale::Raw => 1.0,
        }
    }
}

impl std::str::FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "percent" | "pct" => Ok(Scale::Percent),
            "raw" => Ok(Scale::Raw),
            other => Err(Error::InvalidParameter {
                name: "scale",
                reason: format!("unknown scale `{other}` (expected percent or raw)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnPoint {
    pub timestamp: DateTime<Utc>,
    pub value: f64,
}

/// Record of a power transform applied to a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerTransform {
    pub power: u32,
    /// Scale of the input before it was brought to `Raw` for exponentiation.
    pub source_scale: Scale,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    asset_id: String,
    frequency: Frequency,
    scale: Scale,
    points: Vec<ReturnPoint>,
    transform: Option<PowerTransform>,
}

/// Start of the synthetic daily calendar used for series built from bare values.
pub fn synthetic_epoch() -> DateTime<Utc> {
    NaiveDate::from_ymd_opt(2020, 8, 20)
        .expect("valid date")
        .and_hms_opt(0, 0, 0)
        .expect("midnight")
        .and_utc()
}

impl ReturnSeries {
    pub fn new(
        asset_id: impl Into<String>,
        frequency: Frequency,
        scale: Scale,
        points: Vec<ReturnPoint>,
    ) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !p.value.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "returns",
                reason: format!("non-finite value at index {i}"),
            });
        }
        if let Some(i) = points.windows(2).position(|w| w[0].timestamp >= w[1].timestamp) {
            return Err(Error::DuplicateTimestamp {
                line: i + 1,
                timestamp: points[i + 1].timestamp.to_rfc3339(),
            });
        }
        Ok(Self {
            asset_id: asset_id.into(),
            frequency,
            scale,
            points,
            transform: None,
        })
    }

    /// Wraps bare values on a regular calendar starting at `start`.
    pub fn from_values_at(
        asset_id: impl Into<String>,
        values: &[f64],
        scale: Scale,
        frequency: Frequency,
        start: DateTime<Utc>,
    ) -> Result<Self> {
        let step = Duration::seconds(frequency.seconds());
        let points = values
            .iter()
            .enumerate()
            .map(|(i, &value)| ReturnPoint {
                timestamp: start + step * i as i32,
                value,
            })
            .collect();
        Self::new(asset_id, frequency, scale, points)
    }

    /// Wraps bare values on a daily calendar starting at [`synthetic_epoch`].
    pub fn from_values(asset_id: impl Into<String>, values: &[f64], scale: Scale) -> Result<Self> {
        Self::from_values_at(asset_id, values, scale, Frequency::Day1, synthetic_epoch())
    }

    pub fn asset_id(&self) -> &str {
        &self.asset_id
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn transform(&self) -> Option<PowerTransform> {
        self.transform
    }

    pub fn points(&self) -> &[ReturnPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }

    pub fn timestamps(&self) -> Vec<DateTime<Utc>> {
        self.points.iter().map(|p| p.timestamp).collect()
    }

    pub(crate) fn with_points(&self, points: Vec<ReturnPoint>) -> Self {
        Self {
            asset_id: self.asset_id.clone(),
            frequency: self.frequency,
            scale: self.scale,
            points,
            transform: self.transform,
        }
    }

    /// Multiplies every value by `a`, keeping metadata.
    pub fn scaled_by(&self, a: f64) -> Self {
        self.with_points(
            self.points
                .iter()
                .map(|p| ReturnPoint {
                    timestamp: p.timestamp,
                    value: p.value * a,
                })
                .collect(),
        )
    }
}

/// `ln(P_t / P_{t-1})`, times 100 for [`Scale::Percent`]. Each return carries
/// the timestamp of `P_t`.
pub fn log_returns(prices: &PriceSeries, scale: Scale) -> Result<ReturnSeries> {
    let pts = prices.points();
    if pts.len() < 2 {
        return Err(Error::TooShort { needed: 2, got: pts.len() });
    }
    let factor = scale.factor();
    let points = pts
        .windows(2)
        .map(|w| ReturnPoint {
            timestamp: w[1].timestamp,
            value: factor * (w[1].price / w[0].price).ln(),
        })
        .collect();
    ReturnSeries::new(prices.asset_id(), prices.frequency(), scale, points)
}

/// Raises every return to the odd power `q`. Percent input is first brought
/// back to raw scale so that large exponents stay within `f64` range.
pub fn power_transform(returns: &ReturnSeries, q: u32) -> Result<ReturnSeries> {
    if q == 0 || q.is_multiple_of(2) {
        return Err(Error::EvenPower(q));
    }
    let unscale = returns.scale.factor();
    let exponent = q as i32;
    let points = returns
        .points
        .iter()
        .map(|p| ReturnPoint {
            timestamp: p.timestamp,
            value: (p.value / unscale).powi(exponent),
        })
        .collect();
    Ok(ReturnSeries {
        asset_id: returns.asset_id.clone(),
        frequency: returns.frequency,
        scale: Scale::Raw,
        points,
        transform: Some(PowerTransform {
            power: q,
            source_scale: returns.scale,
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::PricePoint;
    use proptest::prelude::*;

    fn prices(values: &[f64]) -> PriceSeries {
        let start = synthetic_epoch();
        let points = values
            .iter()
            .enumerate()
            .map(|(i, &price)| PricePoint {
                timestamp: start + Duration::days(i as i64),
                price,
            })
            .collect();
        PriceSeries::new("X", Frequency::Day1, points).unwrap()
    }

    #[test]
    fn constant_prices_give_zero_returns() {
        let r = log_returns(&prices(&[100.0, 100.0, 100.0]), Scale::Percent).unwrap();
        assert_eq!(r.values(), vec![0.0, 0.0]);
    }

    #[test]
    fn ten_percent_move() {
        let r = log_returns(&prices(&[100.0, 110.0]), Scale::Percent).unwrap();
        // 100 * ln(1.1), evaluated with 30-digit arithmetic.
        assert!((r.values()[0] - 9.531_017_980_432_486).abs() < 1e-12);
        assert_eq!(r.points()[0].timestamp, synthetic_epoch() + Duration::days(1));
    }

    #[test]
    fn weekday_sample_length() {
        let p: Vec<f64> = (0..609).map(|i| 100.0 + (i % 7) as f64).collect();
        assert_eq!(log_returns(&prices(&p), Scale::Percent).unwrap().len(), 608);
    }

    #[test]
    fn too_short() {
        assert_eq!(
            log_returns(&prices(&[1.0]), Scale::Raw).unwrap_err(),
            Error::TooShort { needed: 2, got: 1 }
        );
    }

    #[test]
    fn power_transform_cases() {
        let r = ReturnSeries::from_values("X", &[2.0, -1.0], Scale::Raw).unwrap();
        assert_eq!(power_transform(&r, 3).unwrap().values(), vec![8.0, -1.0]);
        assert_eq!(power_transform(&r, 1).unwrap().values(), r.values());
        assert_eq!(power_transform(&r, 4).unwrap_err(), Error::EvenPower(4));
        assert_eq!(power_transform(&r, 0).unwrap_err(), Error::EvenPower(0));

        let pct = ReturnSeries::from_values("X", &[5.0, -20.0], Scale::Percent).unwrap();
        let t = power_transform(&pct, 17).unwrap();
        assert_eq!(t.scale(), Scale::Raw);
        assert_eq!(
            t.transform(),
            Some(PowerTransform { power: 17, source_scale: Scale::Percent })
        );
        assert!((t.values()[0] - 0.05f64.powi(17)).abs() <= 1e-15 * 0.05f64.powi(17));
    }

    proptest! {
        #[test]
        fn telescoping_sum(steps in prop::collection::vec(-0.2f64..0.2, 2..300), p0 in 0.01f64..1e5) {
            let mut p = vec![p0];
            for s in &steps {
                let last = *p.last().unwrap();
                p.push(last * s.exp());
            }
            let r = log_returns(&prices(&p), Scale::Raw).unwrap();
            let total: f64 = r.values().iter().sum();
            let direct = (p[p.len() - 1] / p[0]).ln();
            prop_assert!((total - direct).abs() <= 1e-10 * direct.abs().max(1e-3));
        }

        #[test]
        fn price_scaling_equivariance(p in prop::collection::vec(0.5f64..2.0, 2..100), a in 1e-3f64..1e3) {
            let base = log_returns(&prices(&p), Scale::Percent).unwrap().values();
            let scaled: Vec<f64> = p.iter().map(|x| x * a).collect();
            let other = log_returns(&prices(&scaled), Scale::Percent).unwrap().values();
            for (x, y) in base.iter().zip(&other) {
                prop_assert!((x - y).abs() <= 1e-12 * 100.0);
            }
        }

        #[test]
        fn odd_power_keeps_sign(v in prop::collection::vec(-1.0f64..1.0, 1..50)) {
            let r = ReturnSeries::from_values("X", &v, Scale::Raw).unwrap();
            let t = power_transform(&r, 17).unwrap();
            for (x, y) in v.iter().zip(t.values()) {
                prop_assert!(*x == 0.0 || y == 0.0 || x.signum() == y.signum());
            }
        }
    }
}
