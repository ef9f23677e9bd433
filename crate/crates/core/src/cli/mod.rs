//! `diagasym` command-line front end.
//!
//! Every command writes a single report (JSON, or CSV for `ratio`) to `--out`
//! or standard output. Wall-clock timings go into a separate `metadata`
//! object so that reports for identical configurations compare equal once it
//! is removed.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rug::{Float, Integer, Rational};
use serde_json::{json, Value};

use crate::asymptotics::{growth_rate, ratio_diagnostics_with_precision, verify_smooth_point};
use crate::diffapprox::{analyze_series, FamilyConfig, FamilyReport};
use crate::error::{Error, Result};
use crate::numeric::format_rational;
use crate::numeric::rational::format_float;
use crate::recurrence::{growth_candidates_with_precision, guess_p_recurrence, required_terms};
use crate::series::cache::{cache_path, cached_cubical_series, write_series};
use crate::series::{gf_coefficients, tuple_count_product, MultiIndex};

pub const DEFAULT_PRECISION_BITS: u32 = 256;
pub const DEFAULT_CACHE_DIR: &str = ".diagasym-cache";
pub const DEFAULT_ORACLE_BOX: usize = 6;
pub const DEFAULT_MINIMALITY_SAMPLES: usize = 2000;

/// Exit status: all checks passed.
pub const EXIT_OK: u8 = 0;
/// Exit status: a check failed.
pub const EXIT_CHECK_FAILED: u8 = 1;
/// Exit status: usage or resource error.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "diagasym", version, about = "Cubical tensor tuple counts: series, asymptotics and singularity analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute C_d(0..=n_max) and store it in the cache.
    Series(CommonArgs),
    /// Compare the product-formula coefficients with the generating-function
    /// table on the box [0, n_max]^d (default box size 6).
    Oracle(CommonArgs),
    /// Exact smooth-point verification and the leading constant.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Random points for the sampled minimality check.
        #[arg(long, default_value_t = DEFAULT_MINIMALITY_SAMPLES)]
        samples: usize,
    },
    /// Recurrence guessing, growth candidates and differential approximants.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 6)]
        max_order: usize,
        #[arg(long, default_value_t = 7)]
        max_degree: usize,
    },
    /// Ratio table C_d(n) / (K ρ^n n^α) as CSV.
    Ratio(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub d: usize,
    /// Defaults to 100 for d ≤ 4, 40 for d = 5 and 30 above.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PRECISION_BITS)]
    pub precision_bits: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = DEFAULT_CACHE_DIR)]
    pub cache_dir: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub d: usize,
    pub n_max: usize,
    pub precision_bits: u32,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub cache_dir: PathBuf,
}

pub fn default_n_max(d: usize) -> usize {
    match d {
        0..=4 => 100,
        5 => 40,
        _ => 30,
    }
}

impl RunConfig {
    pub fn new(d: usize, n_max: usize) -> Result<Self> {
        let cfg = RunConfig {
            d,
            n_max,
            precision_bits: DEFAULT_PRECISION_BITS,
            seed: 0,
            output_path: None,
            cache_dir: PathBuf::from(DEFAULT_CACHE_DIR),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::domain(format!("d must be at least 2, got {}", self.d)));
        }
        if self.n_max < 1 {
            return Err(Error::domain("n_max must be at least 1"));
        }
        if self.precision_bits < 64 {
            return Err(Error::domain(format!(
                "precision must be at least 64 bits, got {}",
                self.precision_bits
            )));
        }
        Ok(())
    }

    fn from_args(a: &CommonArgs, n_max_default: usize) -> Result<Self> {
        let cfg = RunConfig {
            d: a.d,
            n_max: a.n_max.unwrap_or(n_max_default),
            precision_bits: a.precision_bits,
            seed: a.seed,
            output_path: a.out.clone(),
            cache_dir: a.cache_dir.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Result of a command: the report and whether all its checks passed.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub passed: bool,
}

#[derive(Debug)]
pub enum Report {
    Json(Value),
    Csv(String),
}

impl Report {
    fn render(&self) -> Result<String> {
        Ok(match self {
            Report::Json(v) => serde_json::to_string_pretty(v)? + "\n",
            Report::Csv(s) => s.clone(),
        })
    }
}

fn with_metadata(mut report: Value, started: Instant) -> Value {
    report["metadata"] = json!({
        "elapsed_seconds": started.elapsed().as_secs_f64(),
        "version": env!("CARGO_PKG_VERSION"),
    });
    report
}

fn load_series(cfg: &RunConfig) -> Result<(Vec<Integer>, bool)> {
    cached_cubical_series(&cfg.cache_dir, cfg.d, cfg.n_max)
}

pub fn cmd_series(cfg: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    let (terms, cached) = load_series(cfg)?;
    if let Some(out) = &cfg.output_path {
        write_series(out, cfg.d, &terms)?;
    }
    eprintln!(
        "d={} n_max={}: {} terms ({}) in {:.2}s",
        cfg.d,
        cfg.n_max,
        terms.len(),
        if cached { "cached" } else { "computed" },
        started.elapsed().as_secs_f64()
    );
    let report = json!({
        "command": "series",
        "d": cfg.d,
        "n_max": cfg.n_max,
        "terms": terms.len(),
        "cache_file": cache_path(&cfg.cache_dir, cfg.d),
        "last_term": terms.last().map(|t| t.to_string()),
    });
    Ok(Outcome {
        report: Report::Json(with_metadata(report, started)),
        passed: true,
    })
}

/// Every index of `[0, bound]^d` in lexicographic order.
pub fn index_box(d: usize, bound: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (bound as u64 + 1).pow(d as u32);
    (0..total).map(move |mut code| {
        let mut m = vec![0u32; d];
        for slot in m.iter_mut().rev() {
            *slot = (code % (bound as u64 + 1)) as u32;
            code /= bound as u64 + 1;
        }
        m
    })
}

/// Indices of `[0, bound]^d` where the two coefficient routes disagree, and
/// the number of indices compared.
pub fn oracle_mismatches(d: usize, bound: usize) -> Result<(usize, Vec<Vec<u32>>)> {
    let table = gf_coefficients(d, bound)?;
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in index_box(d, bound as u32) {
        let gf = table
            .get(&m)
            .ok_or_else(|| Error::consistency(format!("index {m:?} missing from the table")))?;
        checked += 1;
        if tuple_count_product(&MultiIndex::new(m.clone())?) != gf {
            bad.push(m);
        }
    }
    Ok((checked, bad))
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<Outcome> {
    let started = Instant::now();
    let (checked, bad) = oracle_mismatches(cfg.d, cfg.n_max)?;
    let report = json!({
        "command": "oracle",
        "d": cfg.d,
        "max_entry": cfg.n_max,
        "checked": checked,
        "mismatches": bad,
        "passed": bad.is_empty(),
    });
    Ok(Outcome {
        report: Report::Json(with_metadata(report, started)),
        passed: bad.is_empty(),
    })
}

pub fn cmd_verify(cfg: &RunConfig, samples: usize) -> Result<Outcome> {
    let started = Instant::now();
    let report = verify_smooth_point(cfg.d, samples, cfg.seed, cfg.precision_bits)?;
    for name in report.failures() {
        eprintln!("check failed: {name}");
    }
    let mut json = report.to_json();
    json["command"] = json!("verify");
    Ok(Outcome {
        passed: report.all_passed(),
        report: Report::Json(with_metadata(json, started)),
    })
}

pub fn cmd_ratio(cfg: &RunConfig) -> Result<Outcome> {
    let (terms, _) = load_series(cfg)?;
    let table = ratio_diagnostics_with_precision(&terms, cfg.d, cfg.precision_bits)?;
    let digits = 30;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::consistency(format!("csv output: {e}"));
    w.write_record(["n", "ratio", "richardson", "scaled_deviation"]).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record([
            row.n.to_string(),
            format_float(&row.ratio, digits),
            row.richardson.as_ref().map_or(String::new(), |r| format_float(r, digits)),
            format_float(&row.scaled_deviation, digits),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::consistency(format!("csv output: {e}")))?;
    if table.mismatch() {
        eprintln!(
            "ratios do not approach 1: |r_N - 1| = {:e} at N = {}",
            table.final_deviation(),
            table.last().n
        );
    }
    Ok(Outcome {
        passed: table.consistent(),
        report: Report::Csv(String::from_utf8(bytes).expect("csv is utf-8")),
    })
}

/// Decimal digits of agreement `−log10 |x − t| / |t|`.
fn agreement_digits(x: &Float, t: &Rational) -> f64 {
    let tf = Float::with_val(x.prec(), t);
    let rel = Float::with_val(x.prec(), x - &tf).abs() / tf.abs();
    if rel.is_zero() {
        f64::INFINITY
    } else {
        -rel.log10().to_f64()
    }
}

fn cluster_cross_check(report: &FamilyReport, d: usize) -> Value {
    let target = Rational::from((1, growth_rate(d)));
    let target_f = target.to_f64();
    match report.nearest_cluster(target_f) {
        Some(c) => json!({
            "target": format_rational(&target),
            "cluster": format_float(&c.location.re, 40),
            "uncertainty": format_float(&c.uncertainty, 6),
            "agreement_digits": agreement_digits(&c.location.re, &target),
        }),
        None => Value::Null,
    }
}

pub fn cmd_analyze(cfg: &RunConfig, max_order: usize, max_degree: usize) -> Result<Outcome> {
    let started = Instant::now();
    let (terms, _) = load_series(cfg)?;

    let recurrence = if terms.len() >= required_terms(max_order, max_degree) {
        match guess_p_recurrence(&terms, max_order, max_degree) {
            Ok(Some(rec)) => {
                let growth = growth_candidates_with_precision(&rec, cfg.precision_bits).ok();
                json!({
                    "found": true,
                    "order": rec.order,
                    "max_degree": rec.max_degree(),
                    "recurrence": rec.to_json(),
                    "growth": growth.map(|g| g.to_json()),
                })
            }
            Ok(None) => json!({ "found": false, "max_order": max_order, "max_degree": max_degree }),
            Err(e) => json!({ "found": false, "error": e.to_string() }),
        }
    } else {
        json!({
            "found": false,
            "error": format!(
                "{} terms available, the search needs {}",
                terms.len(),
                required_terms(max_order, max_degree)
            ),
        })
    };

    let config = FamilyConfig {
        precision_bits: cfg.precision_bits,
        ..FamilyConfig::default()
    };
    let (family, cross_check) = match analyze_series(&terms, terms.len(), (cfg.d >= 3).then_some(cfg.d), &config) {
        Ok(r) => {
            let cross = if cfg.d >= 3 { cluster_cross_check(&r, cfg.d) } else { Value::Null };
            (r.to_json(), cross)
        }
        Err(e @ Error::DegenerateFit(_)) => (json!({ "error": e.to_string() }), Value::Null),
        Err(e) => return Err(e),
    };

    let report = json!({
        "command": "analyze",
        "d": cfg.d,
        "n_max": cfg.n_max,
        "terms": terms.len(),
        "recurrence": recurrence,
        "differential_approximants": family,
        "dominant_cross_check": cross_check,
    });
    Ok(Outcome {
        report: Report::Json(with_metadata(report, started)),
        passed: true,
    })
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let text = report.render()?;
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir)?;
            }
            fs::write(path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a parsed command line and maps the outcome to an exit status.
pub fn run(cli: Cli) -> ExitCode {
    let result = (|| -> Result<(Outcome, Option<PathBuf>)> {
        let (outcome, cfg) = match &cli.command {
            Command::Series(a) => {
                let cfg = RunConfig::from_args(a, default_n_max(a.d))?;
                // `--out` receives a copy of the series file, not a report.
                let out = cmd_series(&cfg)?;
                (out, RunConfig { output_path: None, ..cfg })
            }
            Command::Oracle(a) => {
                let cfg = RunConfig::from_args(a, DEFAULT_ORACLE_BOX)?;
                (cmd_oracle(&cfg)?, cfg)
            }
            Command::Verify { common, samples } => {
                let cfg = RunConfig::from_args(common, default_n_max(common.d))?;
                (cmd_verify(&cfg, *samples)?, cfg)
            }
            Command::Analyze {
                common,
                max_order,
                max_degree,
            } => {
                let cfg = RunConfig::from_args(common, default_n_max(common.d))?;
                (cmd_analyze(&cfg, *max_order, *max_degree)?, cfg)
            }
            Command::Ratio(a) => {
                let cfg = RunConfig::from_args(a, default_n_max(a.d))?;
                (cmd_ratio(&cfg)?, cfg)
            }
        };
        Ok((outcome, cfg.output_path))
    })();
    match result.and_then(|(outcome, out)| emit(&outcome.report, out.as_deref()).map(|_| outcome.passed)) {
        Ok(true) => ExitCode::from(EXIT_OK),
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
