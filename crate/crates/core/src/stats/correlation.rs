use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::TestResult;
use crate::error::{Error, Result};
use crate::ingest::align;
use crate::returns::ReturnSeries;

/// Sample Pearson coefficient with its two-sided t-test (n - 2 df).
///
/// The computation is symmetric in its arguments, so `pearson(a, b)` and
/// `pearson(b, a)` are bit-identical.
pub fn pearson(a: &[f64], b: &[f64]) -> Result<(f64, TestResult)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len();
    if n < 3 {
        return Err(Error::TooShort { needed: 3, got: n });
    }
    let nf = n as f64;
    let mean_a = a.iter().sum::<f64>() / nf;
    let mean_b = b.iter().sum::<f64>() / nf;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        let (dx, dy) = (x - mean_a, y - mean_b);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let r = (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0);
    let df = n - 2;
    let one_minus = 1.0 - r * r;
    let (t, p) = if one_minus <= 0.0 {
        (f64::INFINITY.copysign(r), 0.0)
    } else {
        let t = r * (df as f64 / one_minus).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
        (t, 2.0 * dist.sf(t.abs()))
    };
    Ok((r, TestResult::new(t, p, df)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCell {
    pub r: f64,
    pub n: usize,
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub row: usize,
    pub col: usize,
    pub reason: String,
}

/// Symmetric matrix of pairwise correlations; failed cells are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub asset_ids: Vec<String>,
    pub entries: Vec<Vec<Option<CorrelationCell>>>,
    pub failures: Vec<CellFailure>,
}

impl CorrelationMatrix {
    pub fn size(&self) -> usize {
        self.asset_ids.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&CorrelationCell> {
        self.entries[row][col].as_ref()
    }
}

fn pair_cell(a: &ReturnSeries, b: &ReturnSeries) -> Result<CorrelationCell> {
    let (x, y) = align(a, b)?;
    let (r, result) = pearson(&x.values(), &y.values())?;
    Ok(CorrelationCell { r, n: x.len(), result })
}

/// Pearson correlation of every aligned pair. Cells are evaluated in parallel
/// and assembled in a fixed order.
pub fn correlation_matrix(series: &[ReturnSeries]) -> Result<CorrelationMatrix> {
    let k = series.len();
    if k < 2 {
        return Err(Error::TooShort { needed: 2, got: k });
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| ((i + 1)..k).map(move |j| (i, j))).collect();
    let cells: Vec<Result<CorrelationCell>> = pairs
        .par_iter()
        .map(|&(i, j)| pair_cell(&series[i], &series[j]))
        .collect();

    let mut entries = vec![vec![None; k]; k];
    let mut failures = Vec::new();
    for (i, s) in series.iter().enumerate() {
        let n = s.len();
        entries[i][i] = Some(CorrelationCell {
            r: 1.0,
            n,
            result: TestResult::new(f64::INFINITY, 0.0, n.saturating_sub(2)),
        });
    }
    for (&(i, j), cell) in pairs.iter().zip(cells) {
        match cell {
            Ok(c) => {
                entries[i][j] = Some(c);
                entries[j][i] = Some(c);
            }
            Err(e) => {
                failures.push(CellFailure { row: j, col: i, reason: e.to_string() });
            }
        }
    }
    Ok(CorrelationMatrix {
        asset_ids: series.iter().map(|s| s.asset_id().to_string()).collect(),
        entries,
        failures,
    })
}
