//! Command-line front end. [`run`] parses arguments, dispatches to the
//! command implementations and maps outcomes to exit codes: 0 on success,
//! 1 if any asset failed, 2 on usage errors.

pub mod args;
pub mod commands;
pub mod config;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use self::args::{Cli, Command, CommonArgs, SynthArgs};
use self::commands::{cmd_adf, cmd_corr, cmd_hurst, cmd_rolling, cmd_stats, CommandOutput};
use self::config::{parse_bound, resolve, Overrides, UsageError};
use crate::error::Result;
use crate::ingest::PriceSeries;
use crate::synth::SynthSpec;

pub use self::commands::Failure;
pub use self::config::RunConfig;
pub use self::format::OutputFormat;
pub use self::report::{cmd_report, Manifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "FRACTALIS_THREADS";

/// Runs the CLI with `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(rendered.as_bytes()) } else { stdout.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(Outcome::Usage(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
        Err(Outcome::Fatal(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}

enum Outcome {
    Usage(UsageError),
    Fatal(crate::Error),
}

impl From<UsageError> for Outcome {
    fn from(e: UsageError) -> Self {
        Outcome::Usage(e)
    }
}

impl From<crate::Error> for Outcome {
    fn from(e: crate::Error) -> Self {
        Outcome::Fatal(e)
    }
}

impl From<std::io::Error> for Outcome {
    fn from(e: std::io::Error) -> Self {
        Outcome::Fatal(e.into())
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> std::result::Result<i32, Outcome> {
    let plain = |c: &CommonArgs| resolve(c, &Overrides::default());
    let out = match command {
        Command::Stats(c) => cmd_stats(&plain(&c)?),
        Command::Corr(c) => cmd_corr(&plain(&c)?),
        Command::Adf(a) => {
            let extra = Overrides { lag: a.lag, ..Overrides::default() };
            cmd_adf(&resolve(&a.common, &extra)?)
        }
        Command::Hurst(a) => {
            let extra = Overrides { hurst: a.hurst, splits: a.splits, ..Overrides::default() };
            let (out, curves) = cmd_hurst(&resolve(&a.common, &extra)?);
            if let Some(path) = &a.dump_curve {
                std::fs::write(path, curves)?;
            }
            out
        }
        Command::Rolling(a) => {
            let extra = Overrides { hurst: a.hurst, window: a.window, step: a.step, ..Overrides::default() };
            cmd_rolling(&resolve(&a.common, &extra)?)
        }
        Command::Report(a) => {
            let extra = Overrides {
                hurst: a.hurst,
                splits: a.splits,
                lag: a.lag,
                window: a.window,
                step: a.step,
            };
            let cfg = resolve(&a.common, &extra)?;
            let manifest = cmd_report(&cfg, &a.out)?;
            for w in &manifest.warnings {
                writeln!(stderr, "warning: {w}")?;
            }
            for f in &manifest.failures {
                writeln!(stderr, "error: {}", describe_failure(f))?;
            }
            writeln!(stdout, "{}", a.out.join(report::MANIFEST_FILE).display())?;
            return Ok(if manifest.has_failures() { EXIT_FAILURE } else { EXIT_OK });
        }
        Command::Synth(a) => {
            synth(&a, stdout)?;
            return Ok(EXIT_OK);
        }
    };
    finish(out, stdout, stderr)
}

fn describe_failure(f: &Failure) -> String {
    match f.frequency {
        Some(freq) => format!("{} {} ({}): {}", f.asset, freq, f.stage, f.message),
        None => format!("{} ({}): {}", f.asset, f.stage, f.message),
    }
}

fn finish(out: CommandOutput, stdout: &mut dyn Write, stderr: &mut dyn Write) -> std::result::Result<i32, Outcome> {
    stdout.write_all(out.text.as_bytes())?;
    for w in &out.warnings {
        writeln!(stderr, "warning: {w}")?;
    }
    for f in &out.failures {
        writeln!(stderr, "error: {}", describe_failure(f))?;
    }
    Ok(if out.failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

/// Prices as `timestamp,open` CSV, the format read by every other command.
pub fn price_csv(series: &PriceSeries) -> String {
    let mut s = String::from("timestamp,open\n");
    for p in series.points() {
        s.push_str(&format!("{},{}\n", format::timestamp(p.timestamp), p.price));
    }
    s
}

fn synth(a: &SynthArgs, stdout: &mut dyn Write) -> std::result::Result<(), Outcome> {
    let mut spec = SynthSpec::new(a.kind, a.n, a.seed);
    spec.asset_id = a.asset.clone();
    spec.h = a.h;
    spec.sigma = a.sigma;
    spec.frequency = a.frequency;
    if let Some(raw) = &a.start {
        // The first return follows the initial price by one period.
        spec.start = parse_bound(raw, false)? + chrono::Duration::seconds(a.frequency.seconds());
    }
    let prices = synth_prices(&spec, a.p0)?;
    let text = price_csv(&prices);
    match &a.out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(format!("{}.csv", a.asset)), text)?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn synth_prices(spec: &SynthSpec, p0: f64) -> Result<PriceSeries> {
    if !(p0 > 0.0 && p0.is_finite()) {
        return Err(crate::Error::InvalidParameter { name: "p0", reason: format!("{p0} is not a positive price") });
    }
    spec.prices(p0)
}

/// Applies [`THREADS_ENV`] to the global thread pool. Invalid values are ignored.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}
