//! `report`: every table plus plot data, written to one directory with a
//! JSON manifest.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::commands::{
    adf_rows, adf_table, corr_results, curve_csv, hurst_rows, hurst_table, load_inputs, render_corr, rolling_results,
    rolling_table, stats_rows, stats_table, Failure,
};
use super::config::RunConfig;
use super::format::{json, OutputFormat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactStatus {
    Ok,
    /// Written, but some rows carry errors.
    Partial,
    /// Not written.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub name: String,
    /// File name relative to the report directory.
    pub path: Option<String>,
    pub status: ArtifactStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub artifacts: Vec<Artifact>,
    pub failures: Vec<Failure>,
    pub warnings: Vec<String>,
}

impl Manifest {
    pub fn has_failures(&self) -> bool {
        !self.failures.is_empty()
    }
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

struct Writer<'a> {
    dir: &'a Path,
    artifacts: Vec<Artifact>,
}

impl Writer<'_> {
    fn write(&mut self, name: &str, file: String, contents: &str, partial: bool) -> Result<()> {
        std::fs::write(self.dir.join(&file), contents).map_err(Error::from)?;
        self.artifacts.push(Artifact {
            name: name.to_string(),
            path: Some(file),
            status: if partial { ArtifactStatus::Partial } else { ArtifactStatus::Ok },
        });
        Ok(())
    }

    fn failed(&mut self, name: &str) {
        self.artifacts.push(Artifact { name: name.to_string(), path: None, status: ArtifactStatus::Failed });
    }
}

/// Runs stats, adf, hurst (every frequency and period), rolling and corr,
/// writing each result into `out`. Output bytes depend only on the
/// configuration and the input files.
pub fn cmd_report(cfg: &RunConfig, out: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(out)?;
    let format = cfg.format_or(OutputFormat::Md);
    let ext = format.extension();
    let loaded = load_inputs(cfg);
    let mut w = Writer { dir: out, artifacts: Vec::new() };
    let mut failures = Vec::new();
    let mut warnings = Vec::new();

    for a in &loaded {
        if let Err(e) = &a.prices {
            failures.push(Failure { asset: a.asset.clone(), frequency: None, stage: "load".into(), message: e.to_string() });
        }
    }
    let loaded_ok: Vec<_> = loaded.iter().filter(|a| a.prices.is_ok()).cloned().collect();

    let (rows, f) = stats_rows(&loaded_ok, cfg);
    let text = if format == OutputFormat::Json { json(&rows) } else { stats_table(&rows).render(format) };
    w.write("stats", format!("stats.{ext}"), &text, !f.is_empty())?;
    failures.extend(f);

    let (rows, f) = adf_rows(&loaded_ok, cfg);
    let text = if format == OutputFormat::Json { json(&rows) } else { adf_table(&rows).render(format) };
    w.write("adf", format!("adf.{ext}"), &text, !f.is_empty())?;
    failures.extend(f);

    let (rows, curves, f) = hurst_rows(&loaded_ok, cfg);
    let text = if format == OutputFormat::Json { json(&rows) } else { hurst_table(&rows).render(format) };
    w.write("hurst", format!("hurst.{ext}"), &text, !f.is_empty())?;
    failures.extend(f);
    warnings.extend(
        rows.iter()
            .filter_map(|r| r.warning.as_ref().map(|m| format!("hurst {} {} {}: {m}", r.asset, r.frequency, r.period))),
    );
    match curve_csv(&rows, &curves, cfg.confidence) {
        Ok(text) => w.write("curves", "curves.csv".into(), &text, false)?,
        Err(e) => {
            failures.push(Failure { asset: "*".into(), frequency: None, stage: "curves".into(), message: e.to_string() });
            w.failed("curves");
        }
    }

    let (results, f) = rolling_results(&loaded_ok, cfg);
    for r in &results {
        let name = format!("rolling_{}_{}", file_safe(&r.asset), r.frequency);
        match &r.rolling {
            Some(rolling) => w.write(&name, format!("{name}.csv"), &rolling_table(rolling).csv(), false)?,
            None => w.failed(&name),
        }
    }
    failures.extend(f);

    let (results, f, warn) = corr_results(&loaded_ok, cfg);
    let any_ok = results.iter().any(|r| r.matrix.is_some());
    if any_ok || format == OutputFormat::Json {
        w.write("corr", format!("corr.{ext}"), &render_corr(&results, format), !f.is_empty())?;
    } else {
        w.failed("corr");
    }
    failures.extend(f);
    warnings.extend(warn.into_iter().map(|m| format!("corr {m}")));

    let manifest = Manifest {
        tool: "fractalis".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        artifacts: {
            let mut a = w.artifacts;
            a.push(Artifact { name: "manifest".into(), path: Some(MANIFEST_FILE.into()), status: ArtifactStatus::Ok });
            a
        },
        failures,
        warnings,
    };
    std::fs::write(out.join(MANIFEST_FILE), json(&manifest))?;
    Ok(manifest)
}
