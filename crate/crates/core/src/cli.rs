//! The `paircorr` command line: zero acquisition, pair sums against
//! predictions, spacing histograms and the verification suite.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::{CorrectionState, SingularSeriesTable};
use crate::empirical::{band_pair_count, band_pair_count_unfolded, fh, Mode, PairCorrRequest};
use crate::error::{Error, Result};
use crate::oracle::{CheckId, CheckReport, Oracle};
use crate::theory::{
    auto_theorem, conj1_breakdown, conj2_density, thm1_prediction, thm2_prediction,
    thm3_prediction, thm4_prediction, TheoremId, TheoryBreakdown, Thm2Options,
};
use crate::zeros::{compute_zeros, load_zeros, ZeroTable};

/// Version written into the `# schema` line of every CSV output.
pub const CSV_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "paircorr", version, about = "Pair correlation of zeta zeros: sums, predictions and checks")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load or compute zeros and check them against the counting function.
    Zeros(ZerosArgs),
    /// Empirical F_h(x, T) for each h beside the matching prediction.
    Fh(FhArgs),
    /// Band pair-count histogram against the predicted density.
    Spacing(SpacingArgs),
    /// Run the identity checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `PATH` or `compute:N`.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroSource {
    File(PathBuf),
    Compute(usize),
}

impl FromStr for ZeroSource {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.strip_prefix("compute:") {
            Some(n) => n
                .parse()
                .map(ZeroSource::Compute)
                .map_err(|e| format!("bad zero count {n:?}: {e}")),
            None => Ok(ZeroSource::File(PathBuf::from(s))),
        }
    }
}

/// Height: a number or `max` for the table's coverage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Height {
    Max,
    Value(f64),
}

impl FromStr for Height {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("max") {
            return Ok(Height::Max);
        }
        s.parse().map(Height::Value).map_err(|e| format!("bad T {s:?}: {e}"))
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SourceArgs {
    /// Zero file, one ordinate per line; `compute:N` is also accepted.
    #[arg(long, value_name = "PATH")]
    pub zeros: Option<ZeroSource>,
    /// Compute the first N zeros.
    #[arg(long, value_name = "N")]
    pub compute: Option<usize>,
}

impl SourceArgs {
    fn source(&self) -> ZeroSource {
        match (&self.zeros, self.compute) {
            (Some(z), _) => z.clone(),
            (None, Some(n)) => ZeroSource::Compute(n),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Keep ordinates up to this height.
    #[arg(long = "T", value_name = "VALUE", default_value = "max")]
    pub t: Height,
    /// Write the validated ordinates here.
    #[arg(long, value_name = "PATH")]
    pub export: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FhArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, value_name = "VALUE", conflicts_with = "alpha", required_unless_present = "alpha")]
    pub x: Option<f64>,
    /// Take `x = T^alpha`.
    #[arg(long, value_name = "A")]
    pub alpha: Option<f64>,
    #[arg(long = "T", value_name = "VALUE", default_value = "max")]
    pub t: Height,
    /// Comma-separated shifts.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub h: Vec<f64>,
    /// Only pairs with `|γ - γ' - h| ≤ W`; exact when absent.
    #[arg(long, value_name = "W")]
    pub window: Option<f64>,
    /// Override the range-based choice: T1, T2, T3, T4 or C1.
    #[arg(long, value_name = "ID")]
    pub theorem: Option<TheoremId>,
    /// Terms of the singular series sum (T2 only).
    #[arg(long, value_name = "N", default_value_t = 100_000)]
    pub k_cap: usize,
    /// Upper limit of the y-integral (T2 only).
    #[arg(long, value_name = "Y")]
    pub y_cap: Option<f64>,
    /// Directory for the singular series cache (T2 only).
    #[arg(long, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpacingArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long = "T", value_name = "VALUE", default_value = "max")]
    pub t: Height,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub h: Vec<f64>,
    #[arg(long, default_value_t = 0.25)]
    pub bin_width: f64,
    #[arg(long, default_value_t = 2.0)]
    pub alpha_max: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run only these checks; all when absent.
    #[arg(long = "check", value_name = "ID")]
    pub checks: Vec<CheckId>,
    /// Judge every check against this tolerance instead of its own.
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Zeros for the windowed check; `compute:2000` when absent.
    #[arg(long, value_name = "PATH")]
    pub zeros: Option<ZeroSource>,
    #[arg(long, default_value_t = crate::oracle::DEFAULT_SEED)]
    pub seed: u64,
    /// Size of the singular series table.
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    pub k_cap: usize,
    #[arg(long, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Exit status for a finished command.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_IO: i32 = 2;

/// Runs the parsed command, printing errors to stderr, and returns the exit
/// status.
pub fn run(cfg: RunConfig) -> i32 {
    let r = match cfg.command {
        Command::Zeros(a) => cmd_zeros(&a),
        Command::Fh(a) => cmd_fh(&a),
        Command::Spacing(a) => cmd_spacing(&a),
        Command::Verify(a) => cmd_verify(&a),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Io { .. } | Error::NoOrdinates(_) => EXIT_IO,
                _ => EXIT_FAILED,
            }
        }
    }
}

fn load(source: &ZeroSource, t: Height) -> Result<ZeroTable> {
    match source {
        ZeroSource::File(p) => {
            let cap = match t {
                Height::Max => f64::INFINITY,
                Height::Value(v) => v,
            };
            load_zeros(p, cap)
        }
        ZeroSource::Compute(n) => compute_zeros(*n),
    }
}

fn resolve_height(table: &ZeroTable, t: Height) -> Result<f64> {
    let t = match t {
        Height::Max => table.t_max(),
        Height::Value(v) => v,
    };
    table.check_coverage(t)?;
    Ok(t)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(path: &Option<PathBuf>) -> impl Fn(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.clone().unwrap_or_else(|| PathBuf::from("<stdout>")),
        source,
    }
}

/// Writes rows as versioned CSV or as a JSON array.
fn emit<R: Serialize>(out: &OutputArgs, command: &str, rows: &[R]) -> Result<()> {
    let mut w = sink(&out.out)?;
    match out.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w).map_err(io_err(&out.out))?;
        }
        Format::Csv => {
            writeln!(w, "# schema paircorr-{command} v{CSV_SCHEMA_VERSION}").map_err(io_err(&out.out))?;
            let mut c = csv::Writer::from_writer(&mut w);
            for r in rows {
                c.serialize(r)?;
            }
            c.flush().map_err(io_err(&out.out))?;
        }
    }
    w.flush().map_err(io_err(&out.out))
}

pub fn cmd_zeros(a: &ZerosArgs) -> Result<i32> {
    let table = load(&a.source.source(), a.t)?;
    let table = match a.t {
        Height::Max => table,
        Height::Value(v) => {
            let n = table.up_to(v).len();
            table.truncate(n)
        }
    };
    let report = table.validate_count();
    if let Some(p) = &a.export {
        table.export_to(p)?;
    }
    emit(&a.output, "zeros", std::slice::from_ref(&report))?;
    Ok(if report.ok { EXIT_OK } else { EXIT_FAILED })
}

/// One `fh` output row; prediction fields are empty when no theorem applies.
#[derive(Debug, Clone, Serialize)]
pub struct FhRow {
    pub h: f64,
    pub x: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub empirical_value: f64,
    pub pairs_used: u64,
    pub truncation_bound: f64,
    pub theorem_id: Option<String>,
    pub prediction: Option<f64>,
    pub rel_dev: Option<f64>,
    pub error_envelope: Option<f64>,
}

pub fn cmd_fh(a: &FhArgs) -> Result<i32> {
    let table = load(&a.source.source(), a.t)?;
    let t = resolve_height(&table, a.t)?;
    let (x, log_x) = match (a.x, a.alpha) {
        (Some(x), _) => {
            if !(x >= 1.0) {
                return Err(Error::Config(format!("--x must be >= 1, got {x}")));
            }
            (x, x.ln())
        }
        (None, Some(al)) => (t.powf(al), al * t.ln()),
        (None, None) => return Err(Error::Config("one of --x, --alpha is required".into())),
    };
    let mode = match a.window {
        Some(w) => Mode::Windowed { w },
        None => Mode::Exact,
    };
    let theorem = match a.theorem {
        Some(id) => Some(id),
        None if x <= t * t => Some(auto_theorem(x, t)),
        None => {
            eprintln!("warning: x = {x:e} is beyond T² = {:e}; no prediction", t * t);
            None
        }
    };
    let state = match theorem {
        Some(TheoremId::T2) => {
            let k = a.k_cap.max(crate::arith::DEFAULT_K_MAX);
            let pb = crate::arith::DEFAULT_PRIME_BOUND;
            let st = match &a.cache_dir {
                Some(d) => SingularSeriesTable::load_or_build(d, k, pb)?,
                None => SingularSeriesTable::new(k, pb),
            };
            Some(CorrectionState::new(Arc::new(st)))
        }
        _ => None,
    };
    let mut rows = Vec::with_capacity(a.h.len());
    for &h in &a.h {
        let est = fh(&table, &PairCorrRequest::from_log_x(log_x, t, h, mode)?)?;
        let pred = match theorem {
            Some(id) => predict(id, x, t, h, state.as_ref(), a)?,
            None => None,
        };
        if let Some(b) = &pred {
            for w in &b.warnings {
                eprintln!("warning: h = {h}: {w}");
            }
        }
        let prediction = pred.as_ref().map(|b| b.total);
        rows.push(FhRow {
            h,
            x,
            t,
            empirical_value: est.value,
            pairs_used: est.pairs_used,
            truncation_bound: est.truncation_bound,
            theorem_id: pred.as_ref().map(|b| b.theorem_id.to_string()),
            prediction,
            rel_dev: prediction.map(|p| (est.value - p) / p.abs()),
            error_envelope: pred.as_ref().map(|b| b.error_envelope),
        });
    }
    emit(&a.output, "fh", &rows)?;
    Ok(EXIT_OK)
}

fn predict(
    id: TheoremId,
    x: f64,
    t: f64,
    h: f64,
    state: Option<&CorrectionState>,
    a: &FhArgs,
) -> Result<Option<TheoryBreakdown>> {
    Ok(Some(match id {
        TheoremId::T1 => thm1_prediction(x, t, h)?,
        TheoremId::T2 => {
            let st = state.expect("table built for T2");
            let opts = Thm2Options {
                k_cap: a.k_cap,
                y_cap: a.y_cap,
            };
            thm2_prediction(st, x, t, h, opts)?
        }
        TheoremId::T3 => thm3_prediction(x, t, h)?,
        TheoremId::T4 => thm4_prediction(x, t, h)?,
        TheoremId::C1 => {
            let alpha = x.ln() / t.ln();
            let norm = t / (2.0 * PI) * t.ln();
            // the form factor is F_h scaled down by (T/2π) log T
            let mut b = conj1_breakdown(alpha, t, h);
            b.main_terms.values_mut().for_each(|v| *v *= norm);
            b.total *= norm;
            b
        }
        TheoremId::C2 | TheoremId::C3 => {
            eprintln!("warning: {id} predicts band densities, not F_h; use `spacing`");
            return Ok(None);
        }
    }))
}

/// One histogram bin of `spacing`.
#[derive(Debug, Clone, Serialize)]
pub struct SpacingRow {
    pub h: f64,
    pub alpha_lo: f64,
    pub alpha_hi: f64,
    pub empirical: f64,
    pub predicted: f64,
    pub rel_dev: f64,
    /// Same bin with each pair measured in local mean spacings.
    pub empirical_unfolded: f64,
}

/// Bins `[α_{i-1}, α_i]` of the symmetric band `|γ − γ' − h| ≤ 2πα/log T`,
/// the counts differenced from cumulative bands.
pub fn spacing_rows(table: &ZeroTable, t: f64, h: f64, width: f64, alpha_max: f64) -> Result<Vec<SpacingRow>> {
    if !(width > 0.0) || !(alpha_max >= width) {
        return Err(Error::Config(format!(
            "need 0 < bin width <= alpha max, got {width} and {alpha_max}"
        )));
    }
    let n = (alpha_max / width).round() as usize;
    let edges: Vec<f64> = (0..=n).map(|i| i as f64 * width).collect();
    let cum = |f: &dyn Fn(f64) -> Result<f64>, a: f64| if a == 0.0 { Ok(0.0) } else { f(a) };
    let emp = |a: f64| band_pair_count(table, t, h, a, None);
    let unf = |a: f64| band_pair_count_unfolded(table, t, h, a);
    let den = |a: f64| conj2_density(a, t, h);
    let mut rows = Vec::with_capacity(n);
    let (mut e0, mut u0, mut d0) = (0.0, 0.0, 0.0);
    for w in edges.windows(2) {
        let (e1, u1, d1) = (cum(&emp, w[1])?, cum(&unf, w[1])?, cum(&den, w[1])?);
        let (e, p) = (e1 - e0, d1 - d0);
        rows.push(SpacingRow {
            h,
            alpha_lo: w[0],
            alpha_hi: w[1],
            empirical: e,
            predicted: p,
            rel_dev: (e - p) / p.abs(),
            empirical_unfolded: u1 - u0,
        });
        (e0, u0, d0) = (e1, u1, d1);
    }
    Ok(rows)
}

pub fn cmd_spacing(a: &SpacingArgs) -> Result<i32> {
    let table = load(&a.source.source(), a.t)?;
    let t = resolve_height(&table, a.t)?;
    let mut rows = Vec::new();
    for &h in &a.h {
        rows.extend(spacing_rows(&table, t, h, a.bin_width, a.alpha_max)?);
    }
    emit(&a.output, "spacing", &rows)?;
    Ok(EXIT_OK)
}

/// Flat view of a report for CSV output.
#[derive(Debug, Serialize)]
struct VerifyRow {
    check_id: String,
    passed: bool,
    points: usize,
    max_diff: f64,
    tolerance: f64,
    seed: Option<u64>,
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let ids: Vec<CheckId> = if a.checks.is_empty() {
        CheckId::ALL.to_vec()
    } else {
        a.checks.clone()
    };
    let pb = crate::arith::DEFAULT_PRIME_BOUND;
    let table = match &a.cache_dir {
        Some(d) => SingularSeriesTable::load_or_build(d, a.k_cap, pb)?,
        None => SingularSeriesTable::new(a.k_cap, pb),
    };
    let oracle = Oracle::new(Arc::new(CorrectionState::new(Arc::new(table)))).with_seed(a.seed);
    let zeros = if ids.contains(&CheckId::WindowedVsExact) {
        Some(load(a.zeros.as_ref().unwrap_or(&ZeroSource::Compute(2000)), Height::Max)?)
    } else {
        None
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for r in oracle.run(&ids, zeros.as_ref()) {
        let r = r?;
        reports.push(match a.tolerance {
            Some(tol) => r.with_tolerance(tol),
            None => r,
        });
    }
    for r in &reports {
        eprintln!("{} {}", if r.passed { "PASS" } else { "FAIL" }, r.check_id);
    }
    match a.output.format {
        Format::Json => emit(&a.output, "verify", &reports)?,
        Format::Csv => {
            let rows: Vec<VerifyRow> = reports
                .iter()
                .map(|r| VerifyRow {
                    check_id: r.check_id.to_string(),
                    passed: r.passed,
                    points: r.points.len(),
                    max_diff: r.max_diff(),
                    tolerance: r.tolerance,
                    seed: r.seed,
                })
                .collect();
            emit(&a.output, "verify", &rows)?;
        }
    }
    Ok(if reports.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

/// Parses `args` (program name first) and runs.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(cfg) => run(cfg),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sources_and_heights() {
        assert_eq!("compute:10".parse::<ZeroSource>().unwrap(), ZeroSource::Compute(10));
        assert_eq!(
            "z.txt".parse::<ZeroSource>().unwrap(),
            ZeroSource::File(PathBuf::from("z.txt"))
        );
        assert!("compute:x".parse::<ZeroSource>().is_err());
        assert_eq!("max".parse::<Height>().unwrap(), Height::Max);
        assert_eq!("12.5".parse::<Height>().unwrap(), Height::Value(12.5));
    }

    #[test]
    fn fh_requires_h_and_one_x() {
        let base = ["paircorr", "fh", "--compute", "10"];
        assert!(RunConfig::try_parse_from(base.iter().chain(&["--x", "2"])).is_err());
        assert!(RunConfig::try_parse_from(base.iter().chain(&["--x", "2", "--alpha", "0.5", "--h", "0"])).is_err());
        let c = RunConfig::try_parse_from(base.iter().chain(&["--alpha", "0.5", "--h", "-2,0,2"])).unwrap();
        match c.command {
            Command::Fh(f) => assert_eq!(f.h, vec![-2.0, 0.0, 2.0]),
            _ => panic!(),
        }
    }

    #[test]
    fn sources_are_exclusive() {
        assert!(RunConfig::try_parse_from(["paircorr", "zeros", "--compute", "5", "--zeros", "a"]).is_err());
        assert!(RunConfig::try_parse_from(["paircorr", "zeros"]).is_err());
    }

    #[test]
    fn missing_file_exits_two() {
        assert_eq!(main_with_args(["paircorr", "zeros", "--zeros", "/nonexistent/zeros.txt"]), EXIT_IO);
    }
}
