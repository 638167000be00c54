//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a mathematical violation is
//! found, 2 for usage or configuration errors.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::analysis::{
    extinction_probability, scan_inequality, survival_bounds, write_csv, AnalysisError, GridSpec,
    Mode, ZetaValue,
};
use crate::pgf::{iterate_fl, iterate_fl_sequential, Params};
use crate::simulate::{check_extinction, SimConfig};
use crate::verify::{summarize, verify_all, R_MAX_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gwbound", version, about = "Fractional-linear bounds for negative binomial pgfs")]
pub struct Cli {
    /// Output directory for data files.
    #[arg(long, global = true, env = "GWBOUND_OUT_DIR", default_value = "gwbound_out")]
    pub out: PathBuf,
    /// Record the wall-clock time in output files (breaks byte-identical reruns).
    #[arg(long, global = true)]
    pub timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Exact coefficient identities for 2 <= r <= r_max.
    Verify(VerifyArgs),
    /// Pointwise check of phi_fl <= phi_nb on a grid over [0, 1].
    Scan(ScanArgs),
    /// Extinction probability by fixed-point iteration.
    Extinct(ParamArgs),
    /// Iterates of both pgfs at 0 for n = 1..=N.
    Iterate(IterateArgs),
    /// Monte Carlo lineages.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub r_max: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long)]
    pub r: u32,
    /// A fraction "p/q" (exact) or a decimal (float only).
    #[arg(long)]
    pub zeta: String,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Float,
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 10_000)]
    pub grid: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Float)]
    pub mode: ModeArg,
    /// Random rational arguments checked exactly on top of the grid.
    #[arg(long, default_value_t = 0)]
    pub exact_samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct IterateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 200)]
    pub generations: u32,
    #[arg(long, default_value_t = 1_000_000)]
    pub cap: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Everything needed to reproduce an output file.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Violation(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(format!("json: {e}"))
    }
}

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        if e.is_violation() {
            Failure::Violation(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

/// Parse `p/q` as an exact rational, anything else as a decimal.
pub fn parse_zeta(s: &str) -> Result<ZetaValue, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| format!("zeta numerator: {e}"))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| format!("zeta denominator: {e}"))?;
        if q == BigInt::from(0) {
            return Err("zeta has a zero denominator".into());
        }
        Ok(ZetaValue::Exact(BigRational::new(p, q)))
    } else {
        s.trim()
            .parse::<f64>()
            .map(ZetaValue::Float)
            .map_err(|e| format!("zeta: {e}"))
    }
}

fn float_params(args: &ParamArgs) -> Result<(ZetaValue, Params<f64>), Failure> {
    let zeta = parse_zeta(&args.zeta).map_err(Failure::Usage)?;
    // validate on the exact value when one was given
    if let ZetaValue::Exact(q) = &zeta {
        Params::new(args.r, q.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let p = Params::new(args.r, zeta.to_f64()).map_err(|e| Failure::Usage(e.to_string()))?;
    Ok((zeta, p))
}

fn stem(args: &ParamArgs) -> String {
    let z: String = args
        .zeta
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' { c } else { '-' })
        .collect();
    format!("r{}_z{}", args.r, z)
}

struct Output<'a> {
    dir: &'a Path,
    config: String,
}

impl Output<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn json<T: Serialize>(&self, name: &str, body: &T) -> Result<PathBuf, Failure> {
        #[derive(Serialize)]
        struct Doc<'b, T> {
            config: serde_json::Value,
            result: &'b T,
        }
        let doc = Doc {
            config: serde_json::from_str(&self.config)?,
            result: body,
        };
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, &doc)?;
        writeln!(w)?;
        w.flush()?;
        Ok(path)
    }

    fn csv<T: Serialize>(&self, name: &str, rows: &[T]) -> Result<PathBuf, Failure> {
        let path = self.path(name);
        let w = BufWriter::new(File::create(&path)?);
        write_csv(w, &[format!("config: {}", self.config)], rows)?;
        Ok(path)
    }
}

/// Run the tool on `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Violation(m)) => {
            eprintln!("violation: {m}");
            EXIT_VIOLATION
        }
    }
}

fn dispatch(cli: &Cli) -> Result<(), Failure> {
    let seed = match &cli.command {
        Command::Scan(a) => Some(a.seed),
        Command::Simulate(a) => Some(a.seed),
        _ => None,
    };
    let timestamp = cli.timestamp.then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    let config = RunConfig {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command: &cli.command,
        seed,
        timestamp,
    };
    // reject bad input before touching the file system
    precheck(&cli.command)?;
    fs::create_dir_all(&cli.out)?;
    let out = Output {
        dir: &cli.out,
        config: serde_json::to_string(&config)?,
    };
    match &cli.command {
        Command::Verify(a) => cmd_verify(a, &out),
        Command::Scan(a) => cmd_scan(a, &out),
        Command::Extinct(a) => cmd_extinct(a, &out),
        Command::Iterate(a) => cmd_iterate(a, &out),
        Command::Simulate(a) => cmd_simulate(a, &out),
    }
}

fn precheck(cmd: &Command) -> Result<(), Failure> {
    match cmd {
        Command::Verify(a) => {
            if a.r_max < 2 || a.r_max > R_MAX_LIMIT {
                return Err(Failure::Usage(format!(
                    "--r-max must lie in 2..={R_MAX_LIMIT}, got {}",
                    a.r_max
                )));
            }
        }
        Command::Scan(a) => {
            let (zeta, _) = float_params(&a.params)?;
            if matches!(a.mode, ModeArg::Exact) && !matches!(zeta, ZetaValue::Exact(_)) {
                return Err(Failure::Usage("exact mode needs --zeta as a fraction p/q".into()));
            }
            if a.grid < 2 {
                return Err(Failure::Usage("--grid must be at least 2".into()));
            }
        }
        Command::Extinct(a) => {
            float_params(a)?;
        }
        Command::Iterate(a) => {
            float_params(&a.params)?;
            if a.n < 1 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
        }
        Command::Simulate(a) => {
            let (_, p) = float_params(&a.params)?;
            sim_config(a, &p).validate().map_err(|e| Failure::Usage(e.to_string()))?;
        }
    }
    Ok(())
}

fn cmd_verify(a: &VerifyArgs, out: &Output) -> Result<(), Failure> {
    let reports = verify_all(a.r_max).map_err(|e| Failure::Usage(e.to_string()))?;
    let path = out.path("verify_ledger.jsonl");
    let mut w = BufWriter::new(File::create(&path)?);
    writeln!(w, "{{\"config\":{}}}", out.config)?;
    for rep in &reports {
        serde_json::to_writer(&mut w, rep)?;
        writeln!(w)?;
    }
    w.flush()?;
    let summary = summarize(&reports);
    println!(
        "r in 2..={}: {} reports, {} pass, {} vacuous, {} fail ({} individual checks)",
        a.r_max, summary.total, summary.passed, summary.vacuous, summary.failed, summary.checks
    );
    println!("ledger: {}", path.display());
    match reports.iter().find(|r| !r.passed()) {
        Some(bad) => Err(Failure::Violation(bad.to_string())),
        None => Ok(()),
    }
}

fn cmd_scan(a: &ScanArgs, out: &Output) -> Result<(), Failure> {
    let zeta = parse_zeta(&a.params.zeta).map_err(Failure::Usage)?;
    let spec = GridSpec {
        points: a.grid,
        mode: match a.mode {
            ModeArg::Float => Mode::Float,
            ModeArg::Exact => Mode::Exact,
        },
        exact_samples: a.exact_samples,
        seed: a.seed,
    };
    let report = scan_inequality(a.params.r, &zeta, &spec)?;
    let stem = stem(&a.params);
    let csv = out.csv(&format!("scan_{stem}.csv"), &report.points)?;
    let json = out.json(&format!("scan_{stem}.json"), &report)?;
    println!("r = {}, zeta = {}, mode = {}", report.r, report.zeta, report.mode);
    println!("points: {}, violations: 0", report.points.len());
    let eq: Vec<&str> = report.equality_points.iter().map(|e| e.x.as_str()).collect();
    println!("equality at: {}", eq.join(", "));
    if let (Some(g), Some(x)) = (report.min_positive_gap, report.min_positive_gap_at) {
        println!("min positive gap: {g:e} at x = {x}");
    }
    if report.adjudicated > 0 {
        println!("near-zero gaps settled exactly: {}", report.adjudicated);
    }
    if let Some(g) = &report.exact_samples_min_gap {
        let approx = parse_zeta(g).map(|z| z.to_f64()).unwrap_or(f64::NAN);
        println!("exact samples: {}, min gap {approx:e}", report.exact_samples_checked);
    }
    println!("wrote {} and {}", csv.display(), json.display());
    if report.float_tolerance_breaches > 0 {
        return Err(Failure::Violation(format!(
            "{} float gaps below -{:e} (all positive in exact arithmetic)",
            report.float_tolerance_breaches, report.tolerance
        )));
    }
    Ok(())
}

fn cmd_extinct(a: &ParamArgs, out: &Output) -> Result<(), Failure> {
    let (_, p) = float_params(a)?;
    let e = extinction_probability(&p)?;
    let json = out.json(&format!("extinct_{}.json", stem(a)), &e)?;
    println!("{:.12}", e.value);
    println!(
        "zeta^r = {:.12}, |difference| = {:e}, iterations = {}, mean offspring = {:.6}",
        e.closed_form,
        (e.value - e.closed_form).abs(),
        e.iterations,
        e.mean
    );
    println!("wrote {}", json.display());
    Ok(())
}

#[derive(Serialize)]
struct IterateSummary {
    n: u64,
    fl_matrix: String,
    fl_sequential: String,
    abs_difference: f64,
    exact: bool,
    ordering_violations: Vec<String>,
}

fn cmd_iterate(a: &IterateArgs, out: &Output) -> Result<(), Failure> {
    let (zeta, p) = float_params(&a.params)?;
    let curve = survival_bounds(&p, a.n)?;
    let summary = match &zeta {
        ZetaValue::Exact(q) => {
            let pe = Params::new(a.params.r, q.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
            let zero = BigRational::from_integer(0.into());
            let m = iterate_fl(&pe, a.n, &zero).map_err(AnalysisError::from)?;
            let s = iterate_fl_sequential(&pe, a.n, &zero).map_err(AnalysisError::from)?;
            let diff = crate::pgf::Scalar::to_f64(&(&m - &s)).abs();
            IterateSummary {
                n: a.n,
                fl_matrix: m.to_string(),
                fl_sequential: s.to_string(),
                abs_difference: if m == s { 0.0 } else { diff.max(f64::MIN_POSITIVE) },
                exact: true,
                ordering_violations: curve.violations(1e-14),
            }
        }
        ZetaValue::Float(_) => {
            let m = iterate_fl(&p, a.n, &0.0).map_err(AnalysisError::from)?;
            let s = iterate_fl_sequential(&p, a.n, &0.0).map_err(AnalysisError::from)?;
            IterateSummary {
                n: a.n,
                fl_matrix: m.to_string(),
                fl_sequential: s.to_string(),
                abs_difference: (m - s).abs(),
                exact: false,
                ordering_violations: curve.violations(1e-14),
            }
        }
    };
    let stem = stem(&a.params);
    let csv = out.csv(&format!("iterate_{stem}.csv"), &curve.rows)?;

    #[derive(Serialize)]
    struct Doc<'b> {
        summary: &'b IterateSummary,
        curve: &'b crate::analysis::SurvivalCurve,
    }
    let json = out.json(
        &format!("iterate_{stem}.json"),
        &Doc {
            summary: &summary,
            curve: &curve,
        },
    )?;
    let last = curve.rows.last().expect("n >= 1");
    println!("n = {}: fl_at_0 = {:.15}, nb_at_0 = {:.15}, limit = {:.15}", last.n, last.fl_at_0, last.nb_at_0, last.limit);
    if summary.exact {
        println!("matrix power vs sequential composition (exact): {}", if summary.abs_difference == 0.0 { "identical" } else { "DIFFER" });
    } else {
        println!("matrix power vs sequential composition: |difference| = {:e}", summary.abs_difference);
    }
    println!("wrote {} and {}", csv.display(), json.display());
    let tol = if summary.exact { 0.0 } else { 1e-12 };
    if summary.abs_difference > tol {
        return Err(Failure::Violation(format!(
            "matrix-power iterate {} differs from sequential {}",
            summary.fl_matrix, summary.fl_sequential
        )));
    }
    if let Some(v) = summary.ordering_violations.first() {
        return Err(Failure::Violation(v.clone()));
    }
    Ok(())
}

fn sim_config(a: &SimulateArgs, p: &Params<f64>) -> SimConfig {
    SimConfig {
        r: p.r(),
        zeta: *p.zeta(),
        replicates: a.reps,
        max_generations: a.generations,
        seed: a.seed,
        cap: a.cap,
    }
}

fn cmd_simulate(a: &SimulateArgs, out: &Output) -> Result<(), Failure> {
    let (_, p) = float_params(&a.params)?;
    let cfg = sim_config(a, &p);
    let (report, check) = check_extinction(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    let stem = stem(&a.params);
    let csv = out.csv(&format!("simulate_{stem}.csv"), &report.curve())?;

    #[derive(Serialize)]
    struct Doc<'b> {
        report: &'b crate::simulate::SimReport,
        extinction_check: &'b crate::simulate::ExtinctionCheck,
    }
    let json = out.json(
        &format!("simulate_{stem}.json"),
        &Doc {
            report: &report,
            extinction_check: &check,
        },
    )?;
    println!(
        "extinct {} / survived {} / censored {} of {}",
        report.extinct, report.survived, report.censored, cfg.replicates
    );
    println!(
        "extinct fraction {:.6} vs zeta^r {:.6} ({:+.2} sigma)",
        report.extinct_fraction, check.expected, check.z_score
    );
    if let Some(z) = check.retest_z_score {
        println!("retest with salted seed: {z:+.2} sigma");
    }
    println!("wrote {} and {}", csv.display(), json.display());
    if !check.passed {
        return Err(Failure::Violation("extinct fraction outside the binomial band".into()));
    }
    Ok(())
}
