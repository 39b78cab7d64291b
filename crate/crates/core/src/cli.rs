//! The `cframes` command line: `verify`, `gabor`, `wavelet`, `multiplier`
//! and `report` subcommands. Exit status is 0 when every check passes, 1
//! when some check fails and 2 for usage, input or parse errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::report::Report;
use crate::suite::{self, Format, MultiplierConfig, SuiteConfig, WaveletOptions};
use crate::tf_frames::{WaveletGridSpec, WaveletSpec, WindowSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cframes", version, about = "Sampled continuous frames and frame multipliers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a seeded verification suite.
    Verify(VerifyArgs),
    /// Tightness of the full Gabor system on ℤ_d.
    Gabor(GaborArgs),
    /// Admissibility and Calderón residual of a sampled wavelet frame.
    Wavelet(WaveletArgs),
    /// Budgets and singular values of a multiplier read from JSON.
    Multiplier(MultiplierArgs),
    /// Re-render a saved JSON report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON file with a suite configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long = "n", alias = "N")]
    pub n: Option<usize>,
    /// Tolerance override `CHECK_ID=VALUE`; repeatable.
    #[arg(long = "tol", value_parser = parse_tolerance)]
    pub tol: Vec<(String, f64)>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GaborArgs {
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    /// Width of the periodic Gaussian window, in samples.
    #[arg(long, default_value_t = 2.0, conflicts_with = "window")]
    pub width: f64,
    /// JSON window `{"re": [...], "im": [...]}` of length d.
    #[arg(long)]
    pub window: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WaveletArgs {
    #[arg(long, default_value_t = suite::WAVELET_D)]
    pub d: usize,
    #[arg(long)]
    pub n_a: Option<usize>,
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub n_b: Option<usize>,
    /// CSV `gamma,re,im` with a sampled Fourier profile; Mexican hat otherwise.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Band `LO:HI` of integer frequencies for the test signal.
    #[arg(long, value_parser = parse_band)]
    pub band: Option<(usize, usize)>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MultiplierArgs {
    /// JSON `{"f": frame, "g": frame?, "symbol": {"re", "im"}}`.
    #[arg(long)]
    pub config: PathBuf,
    /// Write the singular values as CSV `index,sigma`.
    #[arg(long)]
    pub sv_csv: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected CHECK_ID=VALUE, got '{s}'"))?;
    let v: f64 = v.parse().map_err(|_| format!("tolerance '{v}' is not a number"))?;
    Ok((k.to_string(), v))
}

fn parse_band(s: &str) -> std::result::Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo: usize = lo.parse().map_err(|_| format!("'{lo}' is not a frequency"))?;
    let hi: usize = hi.parse().map_err(|_| format!("'{hi}' is not a frequency"))?;
    if lo == 0 || hi < lo {
        return Err(format!("band must satisfy 1 ≤ LO ≤ HI, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if code == EXIT_PASS { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match run(cli.command, stdout) {
        Ok(report) => {
            if report.all_pass() {
                EXIT_PASS
            } else {
                let _ = writeln!(
                    stderr,
                    "{} of {} checks failed",
                    report.summary.total - report.summary.passed,
                    report.summary.total
                );
                EXIT_FAIL
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn run(command: Command, stdout: &mut dyn Write) -> Result<Report> {
    match command {
        Command::Verify(a) => {
            let mut cfg = match &a.config {
                Some(p) => serde_json::from_str::<SuiteConfig>(&fs::read_to_string(p)?)?,
                None => SuiteConfig::default(),
            };
            if let Some(s) = a.suite {
                cfg.suite = s;
            }
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(t) = a.trials {
                cfg.trials = t;
            }
            if let Some(d) = a.d {
                cfg.d = d;
            }
            if let Some(n) = a.n {
                cfg.n = n;
            }
            cfg.tolerances.extend(a.tol);
            if let Some(o) = a.output.out {
                cfg.output = Some(o);
            }
            if let Some(f) = a.output.format {
                cfg.format = f;
            }
            let report = suite::run_suite(&cfg)?;
            emit(&report, cfg.output.as_deref(), cfg.format, stdout)?;
            Ok(report)
        }
        Command::Gabor(a) => {
            let window = match &a.window {
                Some(p) => {
                    let data: crate::measure::SymbolData = serde_json::from_str(&fs::read_to_string(p)?)?;
                    WindowSpec::Samples { re: data.re, im: data.im }
                }
                None => WindowSpec::Gaussian { width: a.width },
            };
            let report = suite::run_gabor(a.d, &window)?;
            emit_args(&report, &a.output, stdout)?;
            Ok(report)
        }
        Command::Wavelet(a) => {
            if a.d == 0 {
                return Err(Error::InvalidParameter("signal dimension must be positive".into()));
            }
            let base = WaveletGridSpec::default_for(a.d);
            let grid = WaveletGridSpec {
                a_min: a.a_min.unwrap_or(base.a_min),
                a_max: a.a_max.unwrap_or(base.a_max),
                n_a: a.n_a.unwrap_or(base.n_a),
                n_b: a.n_b.unwrap_or(base.n_b),
            };
            let psi = match &a.profile {
                Some(p) => read_profile(p)?,
                None => WaveletSpec::MexicanHat,
            };
            let opts = WaveletOptions { d: a.d, psi, grid, band: a.band, signal: None };
            let report = suite::run_wavelet(&opts)?;
            emit_args(&report, &a.output, stdout)?;
            Ok(report)
        }
        Command::Multiplier(a) => {
            let cfg: MultiplierConfig = serde_json::from_str(&fs::read_to_string(&a.config)?)?;
            let (report, spectrum) = suite::run_multiplier(&cfg)?;
            if let Some(p) = &a.sv_csv {
                fs::write(p, spectrum.to_csv())?;
            }
            emit_args(&report, &a.output, stdout)?;
            Ok(report)
        }
        Command::Report(a) => {
            let report: Report = serde_json::from_str(&fs::read_to_string(&a.input)?)?;
            emit_args(&report, &a.output, stdout)?;
            Ok(report)
        }
    }
}

/// Reads a `gamma,re,im` CSV with a header row.
fn read_profile(path: &Path) -> Result<WaveletSpec> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::InvalidInput(e.to_string()))?;
    let mut gamma = Vec::new();
    let mut values = Vec::new();
    for row in reader.deserialize::<(f64, f64, f64)>() {
        let (g, re, im) = row.map_err(|e| Error::InvalidInput(format!("profile CSV: {e}")))?;
        gamma.push(g);
        values.push(num_complex::Complex64::new(re, im));
    }
    WaveletSpec::sampled(gamma, values)
}

fn emit_args(report: &Report, output: &OutputArgs, stdout: &mut dyn Write) -> Result<()> {
    emit(report, output.out.as_deref(), output.format.unwrap_or_default(), stdout)
}

fn emit(report: &Report, out: Option<&Path>, format: Format, stdout: &mut dyn Write) -> Result<()> {
    let text = match format {
        Format::Json => report.to_json()? + "\n",
        Format::Csv => report.to_csv()?,
    };
    match out {
        Some(p) => fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}
