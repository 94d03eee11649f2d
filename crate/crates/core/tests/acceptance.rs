//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fractalis::cli::commands::HurstRow;
use fractalis::cli::price_csv;
use fractalis::hurst::{classify_values, fit_hurst, hurst, rs_curve, MemoryClass, PartitionPolicy, RsOptions};
use fractalis::ingest::{Frequency, PriceSeries};
use fractalis::returns::{log_returns, synthetic_epoch, ReturnSeries, Scale};
use fractalis::stats::{adf_test, correlation_matrix, default_adf_lag, describe, jarque_bera};
use fractalis::synth::{fgn, white_noise, SynthKind, SynthSpec};
use fractalis::{rescaled_range, rolling_hurst, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(elapsed: Duration, limit: Duration, outcome: Outcome) -> Outcome {
    let timed = |d: String| format!("{d}; {:.2} s (limit {} s)", elapsed.as_secs_f64(), limit.as_secs());
    match outcome {
        Ok(d) if elapsed <= limit => Ok(timed(d)),
        Ok(d) | Err(d) => Err(timed(d)),
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------------------
// 1. R/S oracle equivalence

/// Straightforward recomputation of the R/S curve, written independently of
/// the library: explicit grids, explicit cumulative-sum vectors.
fn oracle_curve(x: &[f64], policy: PartitionPolicy) -> Vec<(usize, f64)> {
    let big_n = x.len();
    let mut grid: Vec<usize> = Vec::new();
    match policy {
        PartitionPolicy::Halving => {
            let mut n = big_n;
            while n > 6 {
                grid.push(n);
                n /= 2;
            }
        }
        PartitionPolicy::Harmonic => {
            let mut d = 1;
            while big_n / d > 6 {
                let n = big_n / d;
                if !grid.contains(&n) {
                    grid.push(n);
                }
                d += 1;
            }
        }
    }
    let mut out = Vec::new();
    for n in grid {
        let d = big_n / n;
        let mut ratios = Vec::new();
        for m in 0..d {
            let block = &x[m * n..(m + 1) * n];
            let e: f64 = block.iter().sum::<f64>() / n as f64;
            let z: Vec<f64> = block.iter().map(|v| v - e).collect();
            let y: Vec<f64> = z
                .iter()
                .scan(0.0, |acc, zi| {
                    *acc += zi;
                    Some(*acc)
                })
                .collect();
            let r = y.iter().cloned().fold(f64::MIN, f64::max) - y.iter().cloned().fold(f64::MAX, f64::min);
            let s = (z.iter().map(|zi| zi * zi).sum::<f64>() / n as f64).sqrt();
            if s > 0.0 {
                ratios.push(r / s);
            }
        }
        if !ratios.is_empty() {
            out.push((n, ratios.iter().sum::<f64>() / ratios.len() as f64));
        }
    }
    out
}

/// Slope of the closed-form simple regression `k Sxy - Sx Sy / (k Sxx - Sx^2)`.
fn oracle_slope(points: &[(usize, f64)]) -> f64 {
    let k = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(n, rs) in points {
        let (x, y) = ((n as f64).ln(), rs.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    (k * sxy - sx * sy) / (k * sxx - sx * sx)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut max_rs, mut max_h) = (0.0f64, 0.0f64);
    let (mut fitted, mut too_few) = (0, 0);
    for case in 0..200 {
        let len = rng.random_range(16..=128);
        let x: Vec<f64> = (0..len).map(|_| rng.random_range(-5.0..5.0)).collect();
        let policy = if case % 2 == 0 { PartitionPolicy::Halving } else { PartitionPolicy::Harmonic };
        let opts = RsOptions::with_policy(policy);
        let expected = oracle_curve(&x, policy);
        match rs_curve(&x, &opts) {
            Ok(curve) => {
                if curve.len() != expected.len() {
                    return Err(format!("case {case}: {} points vs oracle {}", curve.len(), expected.len()));
                }
                for (p, &(n, rs)) in curve.points.iter().zip(&expected) {
                    if p.n != n {
                        return Err(format!("case {case}: n {} vs oracle {n}", p.n));
                    }
                    max_rs = max_rs.max(rel_err(p.rs, rs));
                }
                let est = fit_hurst(&curve, 0.99).map_err(|e| format!("case {case}: {e}"))?;
                max_h = max_h.max(rel_err(est.h, oracle_slope(&expected)));
                fitted += 1;
            }
            Err(Error::TooFewScales { found }) => {
                if expected.len() >= 4 || found != expected.len() {
                    return Err(format!("case {case}: TooFewScales({found}) but oracle has {} points", expected.len()));
                }
                too_few += 1;
            }
            Err(e) => return Err(format!("case {case}: unexpected error {e}")),
        }
    }
    let detail = format!(
        "200 series ({fitted} fitted, {too_few} with < 4 scales on both sides); max rel err rs {max_rs:.1e}, h {max_h:.1e}"
    );
    within(start.elapsed(), Duration::from_secs(10), check(max_rs <= 1e-12 && max_h <= 1e-12, detail))
}

// ---------------------------------------------------------------------------
// 2. Estimator recovery on fGn

fn mean_h_fgn(h: f64, seeds: std::ops::Range<u64>) -> Result<f64, String> {
    let opts = RsOptions::default();
    let mut hs = Vec::new();
    for seed in seeds {
        let x = fgn(8192, h, 1.0, seed).map_err(|e| e.to_string())?.values();
        hs.push(hurst(&x, &opts, 0.99).map_err(|e| e.to_string())?.h);
    }
    Ok(mean(&hs))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let m3 = mean_h_fgn(0.3, 0..50)?;
    let m5 = mean_h_fgn(0.5, 0..50)?;
    let m7 = mean_h_fgn(0.7, 0..50)?;
    let bands = (m3 - 0.3).abs() <= 0.07 && (m5 - 0.5).abs() <= 0.07 && (m7 - 0.7).abs() <= 0.07;
    let order = m3 + 0.1 < m5 && m5 < m7 - 0.1;
    let detail = format!("mean h-hat over seeds 0..50 at N=8192: H=0.3 -> {m3:.5}, H=0.5 -> {m5:.5}, H=0.7 -> {m7:.5}");
    within(start.elapsed(), Duration::from_secs(120), check(bands && order, detail))
}

// ---------------------------------------------------------------------------
// 3. Null behaviour on white noise

fn criterion_3() -> Outcome {
    let opts = RsOptions::default();
    let mut hs = Vec::new();
    let mut rejected = 0;
    for seed in 0..50 {
        let x = white_noise(8192, 1.0, seed).map_err(|e| e.to_string())?.values();
        let est = hurst(&x, &opts, 0.99).map_err(|e| e.to_string())?;
        if classify_values(est.h, est.p_value, 0.001).class != MemoryClass::Efficient {
            rejected += 1;
        }
        hs.push(est.h);
    }
    let med = median(&hs);
    let rate = rejected as f64 / 50.0;
    check(
        (0.48..=0.58).contains(&med) && rate <= 0.20,
        format!(
            "median h-hat {med:.5} (band [0.48, 0.58]); non-efficient at alpha 0.001 in {rejected}/50 = {:.0}% (limit 20%)",
            rate * 100.0
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. Classification table

fn criterion_4() -> Outcome {
    let alpha = fractalis::cli::config::DEFAULT_ALPHA;
    let cases = [
        ("BTC daily", 0.64169, 8.56e-5, MemoryClass::Persistent),
        ("Silver daily", 0.50182, 0.973, MemoryClass::Efficient),
        ("Silver 15-min", 0.42234, 3.82e-5, MemoryClass::AntiPersistent),
    ];
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, h, p, expected) in cases {
        let got = classify_values(h, p, alpha).class;
        ok &= got == expected;
        parts.push(format!("{name} -> {got}"));
    }
    check(ok, format!("{} (alpha {alpha})", parts.join(", ")))
}

// ---------------------------------------------------------------------------
// 5. ADF default lag

fn criterion_5() -> Outcome {
    let got: Vec<usize> = [88_060, 22_019, 919].iter().map(|&n| default_adf_lag(n).unwrap()).collect();
    check(got == [44, 28, 9], format!("lags for n = 88060, 22019, 919: {got:?}"))
}

// ---------------------------------------------------------------------------
// 6. ADF calibration, with an independent normal-equations check

/// ADF t-statistic by solving the normal equations with Gauss-Jordan
/// elimination.
fn oracle_adf_tau(y: &[f64], lag: usize) -> f64 {
    let dy: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let k = lag + 2;
    let rows: Vec<(Vec<f64>, f64)> = (lag..dy.len())
        .map(|t| {
            let mut x = vec![1.0, y[t]];
            for i in 1..=lag {
                x.push(dy[t - i]);
            }
            (x, dy[t])
        })
        .collect();
    let nobs = rows.len();
    // Augmented matrix [X'X | X'y | I] reduced to [I | beta | (X'X)^-1].
    let width = 2 * k + 1;
    let mut a = vec![vec![0.0; width]; k];
    for (x, target) in &rows {
        for i in 0..k {
            for j in 0..k {
                a[i][j] += x[i] * x[j];
            }
            a[i][k] += x[i] * target;
        }
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[k + 1 + i] = 1.0;
    }
    for c in 0..k {
        let piv = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        a.swap(c, piv);
        let p = a[c][c];
        for v in a[c].iter_mut() {
            *v /= p;
        }
        for r in 0..k {
            if r != c {
                let f = a[r][c];
                let pivot_row = a[c].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v -= f * pv;
                }
            }
        }
    }
    let beta: Vec<f64> = (0..k).map(|i| a[i][k]).collect();
    let ssr: f64 = rows
        .iter()
        .map(|(x, target)| {
            let fit: f64 = x.iter().zip(&beta).map(|(xi, b)| xi * b).sum();
            (target - fit).powi(2)
        })
        .sum();
    let sigma2 = ssr / (nobs - k) as f64;
    beta[1] / (sigma2 * a[1][k + 2]).sqrt()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut walk_kept = 0;
    let mut noise_rejected = 0;
    let mut max_dev = 0.0f64;
    for seed in 0..100 {
        let e = white_noise(1000, 1.0, 10_000 + seed).map_err(|e| e.to_string())?.values();
        let walk: Vec<f64> = e
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect();
        let rw = adf_test(&walk, None).map_err(|e| e.to_string())?;
        if rw.p_value >= 0.05 {
            walk_kept += 1;
        }
        let wn = adf_test(&e, None).map_err(|e| e.to_string())?;
        if wn.p_value < 0.01 {
            noise_rejected += 1;
        }
        if seed < 10 {
            let lag = default_adf_lag(walk.len()).unwrap();
            max_dev = max_dev.max(rel_err(rw.statistic, oracle_adf_tau(&walk, lag)));
            max_dev = max_dev.max(rel_err(wn.statistic, oracle_adf_tau(&e, lag)));
        }
    }
    let detail = format!(
        "random walks not rejected at 5%: {walk_kept}/100 (need >= 90); white noise rejected at 1%: {noise_rejected}/100 (need >= 99); tau vs normal-equations oracle max rel err {max_dev:.1e}"
    );
    within(
        start.elapsed(),
        Duration::from_secs(60),
        check(walk_kept >= 90 && noise_rejected >= 99 && max_dev < 1e-8, detail),
    )
}

// ---------------------------------------------------------------------------
// 7. Jarque-Bera calibration

fn criterion_7() -> Outcome {
    let mut rejected = 0;
    for seed in 0..200 {
        let x = white_noise(5000, 1.0, 20_000 + seed).map_err(|e| e.to_string())?.values();
        if jarque_bera(&x).map_err(|e| e.to_string())?.p_value < 0.05 {
            rejected += 1;
        }
    }
    let rate = rejected as f64 / 200.0;
    // Symmetric (S = 0) with m4 / m2^2 = (4 / 12) / (4 / 12)^2 = 3.
    let sample = [-1.0, 0.0, 0.0, 0.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    let s = describe(&sample).map_err(|e| e.to_string())?;
    let jb = jarque_bera(&sample).map_err(|e| e.to_string())?.statistic;
    check(
        (0.02..=0.08).contains(&rate) && jb == 0.0,
        format!(
            "5%-level rejection {rejected}/200 = {:.1}% (band [2%, 8%]); constructed sample S = {}, K = {}, JB = {jb}",
            rate * 100.0,
            s.skewness,
            s.kurtosis
        ),
    )
}

// ---------------------------------------------------------------------------
// 8. Identities

fn criterion_8() -> Outcome {
    let mut failures = Vec::new();
    let opts = RsOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);

    // D = 2 - H, exactly.
    for seed in 0..20 {
        let x = fgn(512, 0.6, 1.0, seed).unwrap().values();
        let est = hurst(&x, &opts, 0.99).unwrap();
        if est.fractal_dimension != 2.0 - est.h {
            failures.push(format!("D != 2 - H for seed {seed}"));
        }
    }

    // Telescoping: sum of log returns = log(P_T / P_0).
    let mut worst_tel = 0.0f64;
    for _ in 0..20 {
        let n = rng.random_range(2..500);
        let mut p = 100.0;
        let start = synthetic_epoch();
        let pts: Vec<_> = (0..n)
            .map(|i| {
                p *= (rng.random_range(-0.1..0.1f64)).exp();
                fractalis::ingest::PricePoint { timestamp: start + chrono::Duration::days(i as i64), price: p }
            })
            .collect();
        let series = PriceSeries::new("T", Frequency::Day1, pts.clone()).unwrap();
        let r = log_returns(&series, Scale::Raw).unwrap();
        let total: f64 = r.values().iter().sum();
        let expect = (pts[n - 1].price / pts[0].price).ln();
        worst_tel = worst_tel.max((total - expect).abs());
    }
    if worst_tel > 1e-10 {
        failures.push(format!("telescoping error {worst_tel:e}"));
    }

    // Scale invariance of h under x3.7.
    let mut worst_scale = 0.0f64;
    for seed in 0..20 {
        let x = white_noise(1000, 1.0, seed).unwrap().values();
        let y: Vec<f64> = x.iter().map(|v| v * 3.7).collect();
        let a = hurst(&x, &opts, 0.99).unwrap().h;
        let b = hurst(&y, &opts, 0.99).unwrap().h;
        worst_scale = worst_scale.max((a - b).abs());
    }
    if worst_scale > 1e-12 {
        failures.push(format!("scale invariance error {worst_scale:e}"));
    }

    // Correlation matrix: exact symmetry and unit diagonal.
    let series: Vec<ReturnSeries> = (0..5)
        .map(|i| {
            let mut s = SynthSpec::new(if i % 2 == 0 { SynthKind::Fgn } else { SynthKind::WhiteNoise }, 300, 40 + i);
            s.asset_id = format!("S{i}");
            s.h = 0.7;
            s.returns().unwrap()
        })
        .collect();
    let m = correlation_matrix(&series).unwrap();
    for i in 0..m.size() {
        if m.get(i, i).map(|c| c.r) != Some(1.0) {
            failures.push(format!("diagonal {i} is not 1"));
        }
        for j in 0..m.size() {
            if m.get(i, j) != m.get(j, i) {
                failures.push(format!("cell ({i}, {j}) not symmetric"));
            }
        }
    }

    // Y_n = 0 per block.
    let mut worst_y = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(2..300);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-50.0..50.0)).collect();
        worst_y = worst_y.max(rescaled_range(&x).final_deviation.abs());
    }
    if worst_y > 1e-10 {
        failures.push(format!("|Y_n| up to {worst_y:e}"));
    }

    let detail = format!(
        "D = 2 - H exact on 20 fits; telescoping err {worst_tel:.1e}; x3.7 h err {worst_scale:.1e}; corr 5x5 symmetric, unit diagonal; max |Y_n| {worst_y:.1e}"
    );
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; failures: {}", failures.join("; ")))
    }
}

// ---------------------------------------------------------------------------
// 9. Rolling count

fn criterion_9() -> Outcome {
    let r = white_noise(919, 1.0, 9).map_err(|e| e.to_string())?;
    let rolling = rolling_hurst(&r, 150, 1, &RsOptions::default(), 0.99).map_err(|e| e.to_string())?;
    check(
        rolling.points.len() == 770,
        format!("N = 919, W = 150, step 1 -> {} estimates", rolling.points.len()),
    )
}

// ---------------------------------------------------------------------------
// 10. Golden regression of the report

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run_report(out: &Path, threads: &str) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_fractalis"))
        .arg("report")
        .arg("--config")
        .arg(fixture_dir().join("report.toml"))
        .arg("--out")
        .arg(out)
        .env("FRACTALIS_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("report exited with {}: {}", status.status, String::from_utf8_lossy(&status.stderr)));
    }
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(out).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let name = entry.file_name().to_string_lossy().into_owned();
        files.insert(name, std::fs::read(entry.path()).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

fn criterion_10() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs = [("a", "1"), ("b", "1"), ("c", "4"), ("d", "8")];
    let mut outputs = Vec::new();
    for (name, threads) in runs {
        outputs.push(run_report(&tmp.path().join(name), threads)?);
    }
    let identical = outputs.windows(2).all(|w| w[0] == w[1]);
    let mut golden_mismatch = Vec::new();
    for entry in std::fs::read_dir(golden_dir()).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let expected = std::fs::read(entry.path()).map_err(|e| e.to_string())?;
        if outputs[0].get(&name) != Some(&expected) {
            golden_mismatch.push(name);
        }
    }
    check(
        identical && golden_mismatch.is_empty(),
        format!(
            "{} files per run; 2 runs at 1 thread, 1 at 4, 1 at 8: {}; golden mismatches: {:?}",
            outputs[0].len(),
            if identical { "byte-identical" } else { "DIFFERENT" },
            golden_mismatch
        ),
    )
}

// ---------------------------------------------------------------------------
// 11. Power transform end to end

fn hurst_cli(input: &Path, dump: &Path, power: Option<&str>) -> Result<(Vec<HurstRow>, Vec<usize>), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fractalis"));
    cmd.arg("hurst")
        .arg("--input")
        .arg(format!("FGN={}", input.display()))
        .args(["--scale", "raw", "--format", "json", "--dump-curve"])
        .arg(dump);
    if let Some(q) = power {
        cmd.args(["--power", q]);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("hurst exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
    }
    let rows: Vec<HurstRow> = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(dump).map_err(|e| e.to_string())?;
    let grid = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse::<usize>().unwrap())
        .collect();
    Ok((rows, grid))
}

fn criterion_11() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut spec = SynthSpec::new(SynthKind::Fgn, 2000, 17);
    spec.h = 0.6;
    spec.sigma = 0.02;
    spec.asset_id = "FGN".into();
    let prices = spec.prices(100.0).map_err(|e| e.to_string())?;
    let input = tmp.path().join("fgn.csv");
    std::fs::write(&input, price_csv(&prices)).map_err(|e| e.to_string())?;

    let (plain_rows, plain_grid) = hurst_cli(&input, &tmp.path().join("plain.csv"), None)?;
    let (pow_rows, pow_grid) = hurst_cli(&input, &tmp.path().join("pow.csv"), Some("17"))?;
    let est = |rows: &[HurstRow]| rows.first().and_then(|r| r.estimate);
    let (Some(a), Some(b)) = (est(&plain_rows), est(&pow_rows)) else {
        return Err("missing estimate".into());
    };
    check(
        !plain_grid.is_empty() && plain_grid == pow_grid && a.k_points == b.k_points,
        format!(
            "raw fGn N = 2000: untransformed h = {:.5}, q = 17 h = {:.5}; scale grid {:?} in both runs",
            a.h, b.h, pow_grid
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() {
    // `cargo test -- --list` and similar harness flags: nothing to list.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let criteria: [Criterion; 11] = [
        ("R/S oracle equivalence", criterion_1),
        ("estimator recovery on fGn", criterion_2),
        ("null behaviour on white noise", criterion_3),
        ("classification table", criterion_4),
        ("ADF default lag", criterion_5),
        ("ADF calibration", criterion_6),
        ("Jarque-Bera calibration", criterion_7),
        ("identities", criterion_8),
        ("rolling count", criterion_9),
        ("golden regression", criterion_10),
        ("power transform end to end", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("{tag} criterion {:>2} ({name}): {detail}", i + 1);
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: {} of 11 criteria failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
