//! Price ingestion: CSV parsing, opening-price resampling, weekday filtering,
//! period slicing and timestamp alignment of return series.
//!
//! Resampling buckets are UTC-aligned and each emitted point is stamped with
//! the start of its bucket, so series of different assets land on a common
//! grid. Empty buckets are omitted, never forward-filled.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, TimeZone, Utc, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::returns::ReturnSeries;

/// Sampling frequency. Ordered from finest to coarsest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Frequency {
    #[serde(rename = "15m")]
    Min15,
    #[serde(rename = "1h")]
    Hour1,
    #[serde(rename = "1d")]
    Day1,
}

impl Frequency {
    pub const ALL: [Frequency; 3] = [Frequency::Min15, Frequency::Hour1, Frequency::Day1];

    pub fn seconds(self) -> i64 {
        match self {
            Frequency::Min15 => 15 * 60,
            Frequency::Hour1 => 60 * 60,
            Frequency::Day1 => 24 * 60 * 60,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Frequency::Min15 => "15m",
            Frequency::Hour1 => "1h",
            Frequency::Day1 => "1d",
        }
    }

    /// Start of the UTC-aligned bucket containing `ts`.
    pub fn bucket_start(self, ts: DateTime<Utc>) -> DateTime<Utc> {
        let secs = ts.timestamp();
        let width = self.seconds();
        let start = secs.div_euclid(width) * width;
        Utc.timestamp_opt(start, 0).single().expect("bucket start in range")
    }

    /// Classifies a sampling interval by its smallest observed gap.
    pub fn from_gap_seconds(gap: i64) -> Frequency {
        if gap <= Frequency::Min15.seconds() {
            Frequency::Min15
        } else if gap <= Frequency::Hour1.seconds() {
            Frequency::Hour1
        } else {
            Frequency::Day1
        }
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frequency {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "15m" | "15min" => Ok(Frequency::Min15),
            "1h" | "60m" => Ok(Frequency::Hour1),
            "1d" | "daily" => Ok(Frequency::Day1),
            other => Err(Error::InvalidParameter {
                name: "frequency",
                reason: format!("unknown frequency `{other}` (expected 15m, 1h or 1d)"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PricePoint {
    pub timestamp: DateTime<Utc>,
    pub price: f64,
}

/// Opening prices of one asset at one frequency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    asset_id: String,
    frequency: Frequency,
    points: Vec<PricePoint>,
}

impl PriceSeries {
    /// Builds a series, checking that timestamps strictly increase and prices are positive.
    pub fn new(asset_id: impl Into<String>, frequency: Frequency, points: Vec<PricePoint>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !p.price.is_finite() || p.price <= 0.0 {
                return Err(Error::NonPositivePrice { line: i });
            }
            if i > 0 && points[i - 1].timestamp >= p.timestamp {
                return Err(Error::DuplicateTimestamp {
                    line: i,
                    timestamp: p.timestamp.to_rfc3339(),
                });
            }
        }
        Ok(Self {
            asset_id: asset_id.into(),
            frequency,
            points,
        })
    }

    pub fn asset_id(&self) -> &str {
        &self.asset_id
    }

    pub fn frequency(&self) -> Frequency {
        self.frequency
    }

    pub fn points(&self) -> &[PricePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.price).collect()
    }

    fn with_points(&self, points: Vec<PricePoint>) -> Self {
        Self {
            asset_id: self.asset_id.clone(),
            frequency: self.frequency,
            points,
        }
    }
}

/// Half-open UTC interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodSpec {
    start: DateTime<Utc>,
    end: DateTime<Utc>,
}

impl PeriodSpec {
    pub fn new(start: DateTime<Utc>, end: DateTime<Utc>) -> Result<Self> {
        if start >= end {
            return Err(Error::InvalidParameter {
                name: "period",
                reason: format!("start {start} is not before end {end}"),
            });
        }
        Ok(Self { start, end })
    }

    pub fn start(&self) -> DateTime<Utc> {
        self.start
    }

    pub fn end(&self) -> DateTime<Utc> {
        self.end
    }

    pub fn contains(&self, ts: DateTime<Utc>) -> bool {
        self.start <= ts && ts < self.end
    }
}

/// Column mapping for price CSV files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub timestamp_column: String,
    pub open_column: String,
    /// Declared source frequency; inferred from the smallest gap when absent.
    pub frequency: Option<Frequency>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            timestamp_column: "timestamp".to_string(),
            open_column: "open".to_string(),
            frequency: None,
        }
    }
}

/// Parses an ISO-8601 instant, a bare date (midnight UTC), or epoch milliseconds.
pub fn parse_timestamp(raw: &str) -> Option<DateTime<Utc>> {
    let s = raw.trim();
    if s.is_empty() {
        return None;
    }
    if s.bytes().all(|b| b.is_ascii_digit()) || (s.starts_with('-') && s[1..].bytes().all(|b| b.is_ascii_digit())) {
        let millis: i64 = s.parse().ok()?;
        return Utc.timestamp_millis_opt(millis).single();
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Some(dt.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"] {
        if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(naive.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .map(|d| d.and_hms_opt(0, 0, 0).expect("midnight").and_utc())
}

/// Reads a price CSV with a header row. Rows are sorted by timestamp.
///
/// Line numbers in errors are 1-based file lines (the header is line 1).
pub fn parse_price_csv<R: Read>(reader: R, schema: &CsvSchema, asset_id: &str) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr
        .headers()
        .map_err(|e| Error::MalformedCsv { line: 1, reason: e.to_string() })?
        .clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MalformedCsv {
                line: 1,
                reason: format!("missing column `{name}`"),
            })
    };
    let ts_idx = find(&schema.timestamp_column)?;
    let open_idx = find(&schema.open_column)?;

    let mut rows: Vec<(DateTime<Utc>, f64, usize)> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::MalformedCsv { line, reason: e.to_string() })?;
        if record.len() != headers.len() {
            return Err(Error::MalformedCsv {
                line,
                reason: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        let ts = parse_timestamp(&record[ts_idx]).ok_or_else(|| Error::MalformedCsv {
            line,
            reason: format!("unparsable timestamp `{}`", &record[ts_idx]),
        })?;
        let price: f64 = record[open_idx].parse().map_err(|_| Error::MalformedCsv {
            line,
            reason: format!("unparsable price `{}`", &record[open_idx]),
        })?;
        if !price.is_finite() || price <= 0.0 {
            return Err(Error::NonPositivePrice { line });
        }
        rows.push((ts, price, line));
    }

    rows.sort_by_key(|r| r.0);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateTimestamp {
            line: w[0].2.max(w[1].2),
            timestamp: w[1].0.to_rfc3339(),
        });
    }

    let frequency = schema.frequency.unwrap_or_else(|| {
        rows.windows(2)
            .map(|w| (w[1].0 - w[0].0).num_seconds())
            .min()
            .map(Frequency::from_gap_seconds)
            .unwrap_or(Frequency::Day1)
    });
    let points = rows
        .into_iter()
        .map(|(timestamp, price, _)| PricePoint { timestamp, price })
        .collect();
    PriceSeries::new(asset_id, frequency, points)
}

/// Keeps the first (opening) observation of every `target` bucket.
pub fn resample(series: &PriceSeries, target: Frequency) -> Result<PriceSeries> {
    if target < series.frequency {
        return Err(Error::UpsampleRequested {
            from: series.frequency.to_string(),
            to: target.to_string(),
        });
    }
    let mut points: Vec<PricePoint> = Vec::with_capacity(series.len());
    for p in &series.points {
        let bucket = target.bucket_start(p.timestamp);
        if points.last().is_some_and(|last| last.timestamp == bucket) {
            continue;
        }
        points.push(PricePoint {
            timestamp: bucket,
            price: p.price,
        });
    }
    Ok(PriceSeries {
        asset_id: series.asset_id.clone(),
        frequency: target,
        points,
    })
}

pub fn is_weekday(ts: DateTime<Utc>) -> bool {
    !matches!(ts.weekday(), Weekday::Sat | Weekday::Sun)
}

/// Drops Saturday and Sunday (UTC) observations.
pub fn filter_weekdays(series: &PriceSeries) -> PriceSeries {
    series.with_points(series.points.iter().copied().filter(|p| is_weekday(p.timestamp)).collect())
}

pub fn slice_period(series: &PriceSeries, period: &PeriodSpec) -> PriceSeries {
    series.with_points(
        series
            .points
            .iter()
            .copied()
            .filter(|p| period.contains(p.timestamp))
            .collect(),
    )
}

/// Restricts two return series to their common timestamps.
pub fn align(a: &ReturnSeries, b: &ReturnSeries) -> Result<(ReturnSeries, ReturnSeries)> {
    if a.frequency() != b.frequency() {
        return Err(Error::FrequencyMismatch {
            left: a.frequency().to_string(),
            right: b.frequency().to_string(),
        });
    }
    let (pa, pb) = (a.points(), b.points());
    let (mut i, mut j) = (0, 0);
    let mut keep_a = Vec::new();
    let mut keep_b = Vec::new();
    while i < pa.len() && j < pb.len() {
        match pa[i].timestamp.cmp(&pb[j].timestamp) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                keep_a.push(pa[i]);
                keep_b.push(pb[j]);
                i += 1;
                j += 1;
            }
        }
    }
    if keep_a.is_empty() {
        return Err(Error::NoOverlap);
    }
    Ok((a.with_points(keep_a), b.with_points(keep_b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::returns::{log_returns, Scale};
    use chrono::Duration;

    fn day(y: i32, m: u32, d: u32) -> DateTime<Utc> {
        NaiveDate::from_ymd_opt(y, m, d).unwrap().and_hms_opt(0, 0, 0).unwrap().and_utc()
    }

    fn daily(start: DateTime<Utc>, prices: &[f64]) -> PriceSeries {
        let points = prices
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
    fn parses_and_sorts_rows() {
        let csv = "timestamp,open,close\n2021-01-03,3,0\n2021-01-01,1,0\n2021-01-02T00:00:00Z,2,0\n";
        let s = parse_price_csv(csv.as_bytes(), &CsvSchema::default(), "A").unwrap();
        assert_eq!(s.prices(), vec![1.0, 2.0, 3.0]);
        assert_eq!(s.frequency(), Frequency::Day1);
    }

    #[test]
    fn accepts_epoch_millis() {
        let csv = "timestamp,open\n1597881600000,10\n1597882500000,11\n";
        let s = parse_price_csv(csv.as_bytes(), &CsvSchema::default(), "A").unwrap();
        assert_eq!(s.points()[0].timestamp, day(2020, 8, 20));
        assert_eq!(s.frequency(), Frequency::Min15);
    }

    #[test]
    fn rejects_zero_price() {
        let csv = "timestamp,open\n2021-01-01,1\n2021-01-02,0\n";
        let err = parse_price_csv(csv.as_bytes(), &CsvSchema::default(), "A").unwrap_err();
        assert_eq!(err, Error::NonPositivePrice { line: 3 });
    }

    #[test]
    fn rejects_duplicates_and_bad_rows() {
        let dup = "timestamp,open\n2021-01-01,1\n2021-01-01,2\n";
        assert!(matches!(
            parse_price_csv(dup.as_bytes(), &CsvSchema::default(), "A"),
            Err(Error::DuplicateTimestamp { line: 3, .. })
        ));
        let arity = "timestamp,open\n2021-01-01,1,7\n";
        assert!(matches!(
            parse_price_csv(arity.as_bytes(), &CsvSchema::default(), "A"),
            Err(Error::MalformedCsv { line: 2, .. })
        ));
        let header = "time,price\n2021-01-01,1\n";
        assert!(matches!(
            parse_price_csv(header.as_bytes(), &CsvSchema::default(), "A"),
            Err(Error::MalformedCsv { line: 1, .. })
        ));
        let ts = "timestamp,open\nyesterday,1\n";
        assert!(matches!(
            parse_price_csv(ts.as_bytes(), &CsvSchema::default(), "A"),
            Err(Error::MalformedCsv { line: 2, .. })
        ));
    }

    #[test]
    fn resample_keeps_opening_value() {
        let start = day(2021, 3, 1) + Duration::hours(22);
        let points = (0..16)
            .map(|i| PricePoint {
                timestamp: start + Duration::minutes(15 * i),
                price: 100.0 + i as f64,
            })
            .collect();
        let s = PriceSeries::new("X", Frequency::Min15, points).unwrap();
        let d = resample(&s, Frequency::Day1).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.points()[0].price, 100.0);
        assert_eq!(d.points()[1].timestamp, day(2021, 3, 2));
        assert_eq!(d.points()[1].price, 108.0);

        let h = resample(&s, Frequency::Hour1).unwrap();
        assert_eq!(h.prices(), vec![100.0, 104.0, 108.0, 112.0]);
        assert_eq!(resample(&h, Frequency::Hour1).unwrap(), h);
    }

    #[test]
    fn resample_identity_and_upsample_error() {
        let s = daily(day(2022, 1, 1), &[1.0, 2.0, 3.0]);
        assert_eq!(resample(&s, Frequency::Day1).unwrap(), s);
        assert!(matches!(resample(&s, Frequency::Hour1), Err(Error::UpsampleRequested { .. })));
    }

    #[test]
    fn contiguous_quarter_hours_to_hours() {
        let start = day(2020, 8, 20);
        let points = (0..88_060)
            .map(|i| PricePoint {
                timestamp: start + Duration::minutes(15 * i),
                price: 1.0,
            })
            .collect();
        let s = PriceSeries::new("X", Frequency::Min15, points).unwrap();
        assert_eq!(resample(&s, Frequency::Hour1).unwrap().len(), 88_060_usize.div_ceil(4));
    }

    #[test]
    fn weekday_filter() {
        // 2022-01-01 is a Saturday.
        let weekend = daily(day(2022, 1, 1), &[1.0, 2.0]);
        assert!(filter_weekdays(&weekend).is_empty());
        let week = daily(day(2022, 1, 3), &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(filter_weekdays(&week), week);
    }

    #[test]
    fn study_window_calendar_counts() {
        let s = daily(day(2020, 8, 20), &vec![1.0; 919]);
        assert_eq!(s.points().last().unwrap().timestamp, day(2023, 2, 24));
        // Independent count: 1970-01-01 was a Thursday (day index 3 with Monday = 0).
        let weekdays = s
            .points()
            .iter()
            .filter(|p| (p.timestamp.timestamp() / 86_400 + 3).rem_euclid(7) < 5)
            .count();
        assert_eq!(weekdays, 657);
        assert_eq!(filter_weekdays(&s).len(), weekdays);

        let second = PeriodSpec::new(day(2022, 7, 1), day(2023, 2, 25)).unwrap();
        assert_eq!(slice_period(&s, &second).len(), 239);
    }

    #[test]
    fn slicing() {
        let s = daily(day(2022, 1, 1), &[1.0, 2.0, 3.0]);
        let all = PeriodSpec::new(day(2000, 1, 1), day(2100, 1, 1)).unwrap();
        assert_eq!(slice_period(&s, &all), s);
        let none = PeriodSpec::new(day(2030, 1, 1), day(2031, 1, 1)).unwrap();
        assert!(slice_period(&s, &none).is_empty());
        assert!(PeriodSpec::new(day(2022, 1, 2), day(2022, 1, 1)).is_err());
    }

    #[test]
    fn align_crypto_with_stock() {
        let crypto = daily(day(2022, 1, 1), &(1..=29).map(f64::from).collect::<Vec<_>>());
        let stock = filter_weekdays(&crypto);
        let rc = log_returns(&crypto, Scale::Percent).unwrap();
        let rs = log_returns(&stock, Scale::Percent).unwrap();
        let (a, b) = align(&rc, &rs).unwrap();
        let expected: Vec<_> = rs
            .points()
            .iter()
            .filter(|p| rc.points().iter().any(|q| q.timestamp == p.timestamp))
            .map(|p| p.timestamp)
            .collect();
        assert_eq!(a.len(), expected.len());
        assert_eq!(b.timestamps(), expected);
        assert_eq!(a.timestamps(), b.timestamps());

        let (x, y) = align(&rc, &rc).unwrap();
        assert_eq!((x, y), (rc.clone(), rc.clone()));

        let later = log_returns(&daily(day(2023, 1, 1), &[1.0, 2.0, 3.0]), Scale::Percent).unwrap();
        assert_eq!(align(&rc, &later).unwrap_err(), Error::NoOverlap);
    }
}
