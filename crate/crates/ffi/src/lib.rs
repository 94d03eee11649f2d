//! C ABI for the fractalis toolkit.
//!
//! Series and rolling results are opaque handles created and released by
//! this library. Every fallible call returns a [`FractalisStatus`]; on
//! failure the message is available from [`fractalis_last_error_message`]
//! on the same thread. Strings returned to the caller are released with
//! [`fractalis_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use chrono::Duration;

use fractalis::hurst::{classify_values, HurstEstimate, MemoryClass, PartitionPolicy, RollingHurst, RsOptions};
use fractalis::ingest::{Frequency, PricePoint, PriceSeries};
use fractalis::returns::{log_returns, power_transform, synthetic_epoch, ReturnSeries, Scale};
use fractalis::stats::{adf_test, describe, jarque_bera, pearson, Stars, TestResult};
use fractalis::{synth, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractalisStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TooShort = 3,
    ZeroVariance = 4,
    SingularRegression = 5,
    TooFewScales = 6,
    DegenerateFit = 7,
    EvenPower = 8,
    EmbeddingFailure = 9,
    LengthMismatch = 10,
    NoOverlap = 11,
    NonPositivePrice = 12,
    OutOfRange = 13,
    Internal = 14,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractalisScale {
    Percent = 0,
    Raw = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractalisPolicy {
    Halving = 0,
    Harmonic = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractalisMemoryClass {
    Efficient = 0,
    AntiPersistent = 1,
    Persistent = 2,
}

/// Hurst estimate with its slope t-test against 0.5.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FractalisHurst {
    pub h: f64,
    pub log_c: f64,
    pub std_err: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub confidence: f64,
    pub k_points: usize,
    pub fractal_dimension: f64,
    pub out_of_range: bool,
}

/// Test statistic and p-value. `stars` is 0 to 3 for p below 5%, 1%, 0.1%.
/// `df_or_lag` is the ADF lag order or the degrees of freedom.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FractalisTest {
    pub statistic: f64,
    pub p_value: f64,
    pub stars: u8,
    pub df_or_lag: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FractalisStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub std_dev: f64,
    pub max: f64,
    pub min: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

/// Opaque return series.
pub struct FractalisSeries {
    inner: ReturnSeries,
}

/// Opaque rolling Hurst result.
pub struct FractalisRolling {
    inner: RollingHurst,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> FractalisStatus {
    match err {
        Error::TooShort { .. } => FractalisStatus::TooShort,
        Error::ZeroVariance => FractalisStatus::ZeroVariance,
        Error::SingularRegression => FractalisStatus::SingularRegression,
        Error::TooFewScales { .. } => FractalisStatus::TooFewScales,
        Error::DegenerateFit => FractalisStatus::DegenerateFit,
        Error::EvenPower(_) => FractalisStatus::EvenPower,
        Error::EmbeddingFailure { .. } => FractalisStatus::EmbeddingFailure,
        Error::LengthMismatch { .. } => FractalisStatus::LengthMismatch,
        Error::NoOverlap => FractalisStatus::NoOverlap,
        Error::NonPositivePrice { .. } => FractalisStatus::NonPositivePrice,
        Error::InvalidParameter { .. } | Error::FrequencyMismatch { .. } => FractalisStatus::InvalidArgument,
        _ => FractalisStatus::Internal,
    }
}

enum Failure {
    Null(&'static str),
    Range(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FractalisStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FractalisStatus::Ok,
        Ok(Err(Failure::Null(name))) => {
            set_error(format!("null pointer passed as `{name}`"));
            FractalisStatus::NullPointer
        }
        Ok(Err(Failure::Range(msg))) => {
            set_error(msg);
            FractalisStatus::OutOfRange
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".to_string());
            FractalisStatus::Internal
        }
    }
}

unsafe fn input_slice<'a>(data: *const f64, len: usize, name: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(Failure::Null(name));
    }
    Ok(slice::from_raw_parts(data, len))
}

unsafe fn series_ref<'a>(s: *const FractalisSeries, name: &'static str) -> Result<&'a ReturnSeries, Failure> {
    s.as_ref().map(|s| &s.inner).ok_or(Failure::Null(name))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit_series(out: *mut *mut FractalisSeries, series: ReturnSeries) -> Result<(), Failure> {
    write_out(out, Box::into_raw(Box::new(FractalisSeries { inner: series })), "out")
}

fn scale_of(s: FractalisScale) -> Scale {
    match s {
        FractalisScale::Percent => Scale::Percent,
        FractalisScale::Raw => Scale::Raw,
    }
}

fn options_of(p: FractalisPolicy) -> RsOptions {
    RsOptions::with_policy(match p {
        FractalisPolicy::Halving => PartitionPolicy::Halving,
        FractalisPolicy::Harmonic => PartitionPolicy::Harmonic,
    })
}

fn stars_of(s: Stars) -> u8 {
    match s {
        Stars::None => 0,
        Stars::S5 => 1,
        Stars::S1 => 2,
        Stars::S01 => 3,
    }
}

fn test_of(r: &TestResult) -> FractalisTest {
    FractalisTest {
        statistic: r.statistic,
        p_value: r.p_value,
        stars: stars_of(r.stars),
        df_or_lag: r.df_or_lag,
    }
}

fn hurst_of(e: &HurstEstimate) -> FractalisHurst {
    FractalisHurst {
        h: e.h,
        log_c: e.log_c,
        std_err: e.std_err,
        t_stat: e.t_stat,
        p_value: e.p_value,
        ci_low: e.ci_low,
        ci_high: e.ci_high,
        confidence: e.confidence,
        k_points: e.k_points,
        fractal_dimension: e.fractal_dimension,
        out_of_range: e.out_of_range,
    }
}

/// Library version. Release with [`fractalis_string_free`].
#[no_mangle]
pub extern "C" fn fractalis_version() -> *mut c_char {
    CString::new(env!("CARGO_PKG_VERSION")).expect("no nul in version").into_raw()
}

/// Copy of the last error message recorded on this thread, or null if the
/// last call succeeded. Release with [`fractalis_string_free`].
#[no_mangle]
pub extern "C" fn fractalis_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fractalis_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Wraps `len` return values (one per day from a fixed epoch) in a series.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_series_from_returns(
    values: *const f64,
    len: usize,
    scale: FractalisScale,
    out: *mut *mut FractalisSeries,
) -> FractalisStatus {
    guard(|| {
        let v = input_slice(values, len, "values")?;
        emit_series(out, ReturnSeries::from_values("series", v, scale_of(scale))?)
    })
}

/// Log returns of `len` daily prices.
///
/// # Safety
/// `prices` must point to `len` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_series_from_prices(
    prices: *const f64,
    len: usize,
    scale: FractalisScale,
    out: *mut *mut FractalisSeries,
) -> FractalisStatus {
    guard(|| {
        let p = input_slice(prices, len, "prices")?;
        let start = synthetic_epoch();
        let points = p
            .iter()
            .enumerate()
            .map(|(i, &price)| PricePoint { timestamp: start + Duration::days(i as i64), price })
            .collect();
        let series = PriceSeries::new("series", Frequency::Day1, points)?;
        emit_series(out, log_returns(&series, scale_of(scale))?)
    })
}

/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fractalis_series_len(series: *const FractalisSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.len())
}

/// Copies up to `capacity` values into `buffer`; `written` receives the count.
///
/// # Safety
/// `series` must be a live handle, `buffer` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn fractalis_series_values(
    series: *const FractalisSeries,
    buffer: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> FractalisStatus {
    guard(|| {
        let s = series_ref(series, "series")?;
        let n = s.len().min(capacity);
        if n > 0 {
            if buffer.is_null() {
                return Err(Failure::Null("buffer"));
            }
            for (i, p) in s.points()[..n].iter().enumerate() {
                buffer.add(i).write(p.value);
            }
        }
        write_out(written, n, "written")
    })
}

/// New series with every return raised to the odd power `q`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_series_power(
    series: *const FractalisSeries,
    q: u32,
    out: *mut *mut FractalisSeries,
) -> FractalisStatus {
    guard(|| {
        let s = series_ref(series, "series")?;
        emit_series(out, power_transform(s, q)?)
    })
}

/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fractalis_series_free(series: *mut FractalisSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_fgn(
    n: usize,
    hurst: f64,
    sigma: f64,
    seed: u64,
    out: *mut *mut FractalisSeries,
) -> FractalisStatus {
    guard(|| emit_series(out, synth::fgn(n, hurst, sigma, seed)?))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_white_noise(
    n: usize,
    sigma: f64,
    seed: u64,
    out: *mut *mut FractalisSeries,
) -> FractalisStatus {
    guard(|| emit_series(out, synth::white_noise(n, sigma, seed)?))
}

/// R/S Hurst estimate of the series.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_hurst(
    series: *const FractalisSeries,
    policy: FractalisPolicy,
    confidence: f64,
    out: *mut FractalisHurst,
) -> FractalisStatus {
    guard(|| {
        let s = series_ref(series, "series")?;
        let est = fractalis::hurst(&s.values(), &options_of(policy), confidence)?;
        write_out(out, hurst_of(&est), "out")
    })
}

/// Memory regime of an estimate `(h, p_value)` at level `alpha`.
#[no_mangle]
pub extern "C" fn fractalis_classify(h: f64, p_value: f64, alpha: f64) -> FractalisMemoryClass {
    match classify_values(h, p_value, alpha).class {
        MemoryClass::Efficient => FractalisMemoryClass::Efficient,
        MemoryClass::AntiPersistent => FractalisMemoryClass::AntiPersistent,
        MemoryClass::Persistent => FractalisMemoryClass::Persistent,
    }
}

/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_describe(series: *const FractalisSeries, out: *mut FractalisStats) -> FractalisStatus {
    guard(|| {
        let d = describe(&series_ref(series, "series")?.values())?;
        write_out(
            out,
            FractalisStats {
                n: d.n,
                mean: d.mean,
                median: d.median,
                std_dev: d.std,
                max: d.max,
                min: d.min,
                skewness: d.skewness,
                kurtosis: d.kurtosis,
            },
            "out",
        )
    })
}

/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_jarque_bera(series: *const FractalisSeries, out: *mut FractalisTest) -> FractalisStatus {
    guard(|| {
        let r = jarque_bera(&series_ref(series, "series")?.values())?;
        write_out(out, test_of(&r), "out")
    })
}

/// ADF test with lag order `lag`; a negative `lag` selects the default.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_adf(series: *const FractalisSeries, lag: i64, out: *mut FractalisTest) -> FractalisStatus {
    guard(|| {
        let s = series_ref(series, "series")?;
        let lag = if lag < 0 { None } else { Some(lag as usize) };
        write_out(out, test_of(&adf_test(&s.values(), lag)?), "out")
    })
}

/// Pearson correlation of two equally long value arrays.
///
/// # Safety
/// `a` and `b` must point to `len` readable doubles; `r` and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_pearson(
    a: *const f64,
    b: *const f64,
    len: usize,
    r: *mut f64,
    out: *mut FractalisTest,
) -> FractalisStatus {
    guard(|| {
        let (x, y) = (input_slice(a, len, "a")?, input_slice(b, len, "b")?);
        let (coef, res) = pearson(x, y)?;
        write_out(r, coef, "r")?;
        write_out(out, test_of(&res), "out")
    })
}

/// Hurst estimates over windows of `window` returns advanced by `step`.
///
/// # Safety
/// `series` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_rolling(
    series: *const FractalisSeries,
    window: usize,
    step: usize,
    policy: FractalisPolicy,
    confidence: f64,
    out: *mut *mut FractalisRolling,
) -> FractalisStatus {
    guard(|| {
        let s = series_ref(series, "series")?;
        let r = fractalis::rolling_hurst(s, window, step, &options_of(policy), confidence)?;
        write_out(out, Box::into_raw(Box::new(FractalisRolling { inner: r })), "out")
    })
}

/// # Safety
/// `rolling` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fractalis_rolling_len(rolling: *const FractalisRolling) -> usize {
    rolling.as_ref().map_or(0, |r| r.inner.points.len())
}

/// Window `index`: end timestamp (Unix seconds) and estimate. `has_estimate`
/// is false for windows with too few usable scales.
///
/// # Safety
/// `rolling` must be a live handle; the out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fractalis_rolling_get(
    rolling: *const FractalisRolling,
    index: usize,
    timestamp: *mut i64,
    has_estimate: *mut bool,
    out: *mut FractalisHurst,
) -> FractalisStatus {
    guard(|| {
        let r = rolling.as_ref().ok_or(Failure::Null("rolling"))?;
        let point = r.inner.points.get(index).ok_or_else(|| {
            Failure::Range(format!("index {index} out of range for {} windows", r.inner.points.len()))
        })?;
        write_out(timestamp, point.timestamp.timestamp(), "timestamp")?;
        write_out(has_estimate, point.estimate.is_some(), "has_estimate")?;
        write_out(out, point.estimate.as_ref().map(hurst_of).unwrap_or_default(), "out")
    })
}

/// # Safety
/// `rolling` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fractalis_rolling_free(rolling: *mut FractalisRolling) {
    if !rolling.is_null() {
        drop(Box::from_raw(rolling));
    }
}
