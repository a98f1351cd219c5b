//! Command-line front end.
//!
//! Output contract (version 1):
//!
//! * `simulate --format csv`: header `snr_db,quantity,rate_bits_per_use,std_err,trials`,
//!   one row per grid point per quantity, grid order then quantity order
//!   `legit, leak, leak_conditioned, secrecy`.
//! * `simulate --format json`: one [`SimulationOutput`] document.
//! * `estimate-dof --format json`: one [`DofReport`] document.
//! * `reproduce --format json`: one [`ReproduceReport`] document.
//! * `region`: `--check` prints `inside` or `outside`; `--vertices` and
//!   `--boundary` print `d1,d2` CSV.
//!
//! Data goes to `--out` or standard output; diagnostics go to standard error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::channel::RngSeed;
use crate::error::{Error, Result};
use crate::estimator::{
    evaluate_all, fit_slope, sweep_pair, Quantity, RatePoint, DEFAULT_TRIALS,
};
use crate::region::{self, RegionPoint};
use crate::schemes::SchemeId;

pub const FORMAT_VERSION: u32 = 1;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_DOF_TOL: f64 = 0.03;
pub const DEFAULT_REPRODUCE_TOL: f64 = 0.05;

#[derive(Debug, Parser)]
#[command(name = "sdof", version, about = "Secrecy DoF of MISO wiretap and broadcast channels with delayed CSIT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo rates over an SNR grid.
    Simulate(SimulateArgs),
    /// Fit high-SNR slopes and compare them with the expected DoF.
    EstimateDof(EstimateArgs),
    /// Query the two-user secrecy DoF region.
    Region(RegionArgs),
    /// Sum SDoF with no, delayed and perfect CSIT.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// wiretap-sym, wiretap-asym, bcc, perfect-csit-wiretap, perfect-csit-bcc or no-csit
    #[arg(long)]
    pub scheme: String,
    /// Comma list (30,40,50) or start:step:stop (30:5:60), in dB.
    #[arg(long = "snr-db", default_value = "30:5:60", allow_hyphen_values = true)]
    pub snr_db: String,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Restrict output to one quantity: legit, leak, leak_conditioned or secrecy.
    #[arg(long)]
    pub quantity: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Pass/fail tolerance on every slope.
    #[arg(long, default_value_t = DEFAULT_DOF_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("query").required(true).args(["check", "vertices", "boundary"])))]
pub struct RegionArgs {
    /// Test membership of the point (D1, D2).
    #[arg(long, num_args = 2, value_names = ["D1", "D2"], allow_negative_numbers = true)]
    pub check: Option<Vec<f64>>,
    /// Membership tolerance for --check.
    #[arg(long, default_value_t = 0.0)]
    pub tol: f64,
    /// Print the corner points.
    #[arg(long)]
    pub vertices: bool,
    /// Print N points along the boundary.
    #[arg(long, value_name = "N")]
    pub boundary: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    #[arg(long = "snr-db", default_value = "30:5:60", allow_hyphen_values = true)]
    pub snr_db: String,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_REPRODUCE_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: SchemeId,
    pub grid_db: Vec<f64>,
    pub trials: u64,
    pub seed: RngSeed,
}

impl RunConfig {
    pub fn new(scheme: SchemeId, grid_db: Vec<f64>, trials: u64, seed: u64) -> Result<Self> {
        validate_grid(&grid_db)?;
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(Self {
            scheme,
            grid_db,
            trials,
            seed: RngSeed(seed),
        })
    }

    fn from_args(args: &RunArgs) -> Result<Self> {
        Self::new(args.scheme.parse()?, parse_grid(&args.snr_db)?, args.trials, args.seed)
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("SNR grid is empty".into()));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Config("SNR grid has a non-finite value".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config("SNR grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Parses `30,35,40` or `30:5:60` (inclusive of the stop value).
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("malformed number {s:?} in SNR grid")))
    };
    let grid = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [start, step, stop] = parts[..] else {
            return Err(Error::Config(format!("expected start:step:stop, got {text:?}")));
        };
        let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Config("grid step must be positive".into()));
        }
        if stop < start {
            return Err(Error::Config("grid stop is below start".into()));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| start + k as f64 * step).collect()
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    validate_grid(&grid)?;
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationRow {
    pub snr_db: f64,
    pub quantity: Quantity,
    pub rate_bits_per_use: f64,
    pub std_err: f64,
    pub trials: u64,
}

impl From<&RatePoint> for SimulationRow {
    fn from(p: &RatePoint) -> Self {
        Self {
            snr_db: p.power_db,
            quantity: p.quantity,
            rate_bits_per_use: p.rate(),
            std_err: p.std_err,
            trials: p.trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationOutput {
    pub format_version: u32,
    pub scheme: SchemeId,
    pub seed: u64,
    pub trials: u64,
    pub rows: Vec<SimulationRow>,
}

pub fn cmd_simulate(config: &RunConfig, quantity: Option<Quantity>) -> Result<SimulationOutput> {
    if let Some(q) = quantity {
        if !q.is_available_for(config.scheme) {
            return Err(Error::IncompatibleQuantity {
                scheme: config.scheme.name(),
                quantity: q.name(),
            });
        }
    }
    let mut rows = Vec::new();
    for &db in &config.grid_db {
        let points = evaluate_all(config.scheme, db, config.trials, config.seed)?;
        rows.extend(
            points
                .iter()
                .filter(|p| quantity.is_none_or(|q| q == p.quantity))
                .map(SimulationRow::from),
        );
    }
    Ok(SimulationOutput {
        format_version: FORMAT_VERSION,
        scheme: config.scheme,
        seed: config.seed.0,
        trials: config.trials,
        rows,
    })
}

pub fn simulation_csv(output: &SimulationOutput) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in &output.rows {
        writer
            .serialize(row)
            .map_err(|e| Error::Config(format!("csv: {e}")))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Config(format!("json: {e}")))
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Config(format!("json: {e}")))
}

pub fn parse_simulation_json(text: &str) -> Result<SimulationOutput> {
    from_json(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofEntry {
    pub label: String,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub target: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofReport {
    pub format_version: u32,
    pub scheme: SchemeId,
    pub grid_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub entries: Vec<DofEntry>,
    pub pass: bool,
}

impl DofReport {
    pub fn entry(&self, label: &str) -> Option<&DofEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

pub fn parse_dof_report_json(text: &str) -> Result<DofReport> {
    from_json(text)
}

/// Expected slopes for single-message schemes: (secrecy, legit, leak).
fn single_user_targets(scheme: SchemeId) -> (f64, f64, f64) {
    match scheme {
        SchemeId::WiretapSymmetric3Slot => (2.0 / 3.0, 2.0 / 3.0, 0.0),
        SchemeId::WiretapAsymmetric2Slot => (0.5, 0.5, 0.0),
        SchemeId::BaselinePerfectCsitWiretap => (1.0, 1.0, 0.0),
        SchemeId::BaselineNoCsit => (0.0, 1.0, 1.0),
        SchemeId::Bcc4Slot | SchemeId::BaselinePerfectCsitBcc => {
            unreachable!("two-user scheme")
        }
    }
}

/// Expected per-user secrecy slope of two-user schemes (legit slope is the same).
fn per_user_target(scheme: SchemeId) -> f64 {
    match scheme {
        SchemeId::Bcc4Slot => 0.5,
        SchemeId::BaselinePerfectCsitBcc => 1.0,
        SchemeId::BaselineNoCsit => 0.0,
        _ => unreachable!("single-user scheme"),
    }
}

fn entry(label: &str, points: &[(f64, f64)], target: f64, tol: f64) -> Result<DofEntry> {
    let fit = fit_slope(points)?;
    Ok(DofEntry {
        label: label.to_string(),
        pass: (fit.slope - target).abs() <= tol,
        slope: fit.slope,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        target,
    })
}

fn pair_series(
    pairs: &[(RatePoint, RatePoint)],
    f: impl Fn(&RatePoint, &RatePoint) -> f64,
) -> Vec<(f64, f64)> {
    pairs.iter().map(|(a, b)| (a.power_db, f(a, b))).collect()
}

pub fn cmd_estimate_dof(config: &RunConfig, tol: f64) -> Result<DofReport> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::Config(format!("tolerance must be non-negative, got {tol}")));
    }
    let scheme = config.scheme;
    let entries = if scheme.is_two_user() {
        let pairs = sweep_pair(scheme, &config.grid_db, config.trials, config.seed)?;
        let d = per_user_target(scheme);
        vec![
            entry("user1_secrecy", &pair_series(&pairs, |a, _| a.secrecy_rate), d, tol)?,
            entry("user2_secrecy", &pair_series(&pairs, |_, b| b.secrecy_rate), d, tol)?,
            entry(
                "sum_secrecy",
                &pair_series(&pairs, |a, b| a.secrecy_rate + b.secrecy_rate),
                2.0 * d,
                tol,
            )?,
            entry("user1_legit", &pair_series(&pairs, |a, _| a.legit_rate), d, tol)?,
            entry("user2_legit", &pair_series(&pairs, |_, b| b.legit_rate), d, tol)?,
            entry("user1_leak_conditioned", &pair_series(&pairs, |a, _| a.leak_rate), 0.0, tol)?,
            entry("user2_leak_conditioned", &pair_series(&pairs, |_, b| b.leak_rate), 0.0, tol)?,
        ]
    } else {
        let mut by_quantity: Vec<(Quantity, Vec<(f64, f64)>)> = Vec::new();
        for &db in &config.grid_db {
            for p in evaluate_all(scheme, db, config.trials, config.seed)? {
                match by_quantity.iter_mut().find(|(q, _)| *q == p.quantity) {
                    Some((_, pts)) => pts.push((db, p.rate())),
                    None => by_quantity.push((p.quantity, vec![(db, p.rate())])),
                }
            }
        }
        let series = |q: Quantity| {
            by_quantity
                .iter()
                .find(|(x, _)| *x == q)
                .map(|(_, pts)| pts.as_slice())
                .unwrap_or_default()
        };
        let (secrecy, legit, leak) = single_user_targets(scheme);
        vec![
            entry("secrecy", series(Quantity::Secrecy), secrecy, tol)?,
            entry("legit", series(Quantity::Legit), legit, tol)?,
            entry("leak", series(Quantity::Leak), leak, tol)?,
        ]
    };
    Ok(DofReport {
        format_version: FORMAT_VERSION,
        scheme,
        grid_db: config.grid_db.clone(),
        trials: config.trials,
        seed: config.seed.0,
        tol,
        pass: entries.iter().all(|e| e.pass),
        entries,
    })
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn grid_summary(grid: &[f64]) -> String {
    format!(
        "{}..{} dB, {} points",
        grid.first().copied().unwrap_or_default(),
        grid.last().copied().unwrap_or_default(),
        grid.len()
    )
}

pub fn dof_report_text(report: &DofReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "scheme {} ({}, {} trials, seed {}, tol {})",
        report.scheme,
        grid_summary(&report.grid_db),
        report.trials,
        report.seed,
        report.tol
    );
    let _ = writeln!(
        s,
        "{:<24} {:>9} {:>9} {:>9} {:>8}  verdict",
        "quantity", "slope", "target", "intercept", "r^2"
    );
    for e in &report.entries {
        let _ = writeln!(
            s,
            "{:<24} {:>9.4} {:>9.4} {:>9.4} {:>8.5}  {}",
            e.label,
            e.slope,
            e.target,
            e.intercept,
            e.r_squared,
            verdict(e.pass)
        );
    }
    let _ = writeln!(s, "overall: {}", verdict(report.pass));
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceRow {
    pub csit: String,
    pub scheme: SchemeId,
    pub sum_sdof: f64,
    pub target: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproduceReport {
    pub format_version: u32,
    pub grid_db: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    pub rows: Vec<ReproduceRow>,
    pub pass: bool,
}

pub fn parse_reproduce_json(text: &str) -> Result<ReproduceReport> {
    from_json(text)
}

/// Sum secrecy DoF of the two-user broadcast channel under no, delayed and
/// perfect CSIT, with targets 0, 1 and 2.
pub fn cmd_reproduce(grid_db: &[f64], trials: u64, seed: u64, tol: f64) -> Result<ReproduceReport> {
    validate_grid(grid_db)?;
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let cases = [
        ("no", SchemeId::BaselineNoCsit, 0.0),
        ("delayed", SchemeId::Bcc4Slot, 1.0),
        ("perfect", SchemeId::BaselinePerfectCsitBcc, 2.0),
    ];
    let mut rows = Vec::with_capacity(cases.len());
    for (csit, scheme, target) in cases {
        let pairs = sweep_pair(scheme, grid_db, trials, RngSeed(seed))?;
        let sum = fit_slope(&pair_series(&pairs, |a, b| a.secrecy_rate + b.secrecy_rate))?;
        rows.push(ReproduceRow {
            csit: csit.to_string(),
            scheme,
            sum_sdof: sum.slope,
            target,
            pass: (sum.slope - target).abs() <= tol,
        });
    }
    Ok(ReproduceReport {
        format_version: FORMAT_VERSION,
        grid_db: grid_db.to_vec(),
        trials,
        seed,
        tol,
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

pub fn reproduce_text(report: &ReproduceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "Sum secrecy DoF of the two-user MISO broadcast channel ({}, {} trials, seed {}, tol {})",
        grid_summary(&report.grid_db),
        report.trials,
        report.seed,
        report.tol
    );
    let _ = writeln!(s, "{:<10} {:<18} {:>10} {:>8}  verdict", "CSIT", "scheme", "estimate", "target");
    for r in &report.rows {
        let _ = writeln!(
            s,
            "{:<10} {:<18} {:>10.4} {:>8.1}  {}",
            r.csit,
            r.scheme.name(),
            r.sum_sdof,
            r.target,
            verdict(r.pass)
        );
    }
    let _ = writeln!(s, "overall: {}", verdict(report.pass));
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionQuery {
    Check { d1: f64, d2: f64, tol: f64 },
    Vertices,
    Boundary(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionOutput {
    Check { d1: f64, d2: f64, tol: f64, inside: bool },
    Points { points: Vec<RegionPoint> },
}

pub fn cmd_region(query: RegionQuery) -> Result<RegionOutput> {
    match query {
        RegionQuery::Check { d1, d2, tol } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(Error::Config(format!("tolerance must be non-negative, got {tol}")));
            }
            Ok(RegionOutput::Check {
                d1,
                d2,
                tol,
                inside: region::contains(d1, d2, tol),
            })
        }
        RegionQuery::Vertices => Ok(RegionOutput::Points {
            points: region::vertices(),
        }),
        RegionQuery::Boundary(n) => Ok(RegionOutput::Points {
            points: region::boundary(n)?,
        }),
    }
}

pub fn region_text(output: &RegionOutput) -> String {
    match output {
        RegionOutput::Check { inside, .. } => {
            format!("{}\n", if *inside { "inside" } else { "outside" })
        }
        RegionOutput::Points { points } => {
            let mut s = String::from("d1,d2\n");
            for p in points {
                let _ = writeln!(s, "{},{}", p.d1, p.d2);
            }
            s
        }
    }
}

fn unsupported(command: &str, format: OutputFormat) -> Error {
    Error::Config(format!("{command} does not support --format {format:?}"))
}

/// Runs a parsed command and returns what it would write.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Simulate(args) => {
            let config = RunConfig::from_args(&args.run)?;
            let quantity = args.quantity.as_deref().map(str::parse).transpose()?;
            let output = cmd_simulate(&config, quantity)?;
            match args.format {
                OutputFormat::Csv => simulation_csv(&output),
                OutputFormat::Json => to_json(&output),
                OutputFormat::Text => Err(unsupported("simulate", args.format)),
            }
        }
        Command::EstimateDof(args) => {
            let config = RunConfig::from_args(&args.run)?;
            let report = cmd_estimate_dof(&config, args.tol)?;
            match args.format {
                OutputFormat::Text => Ok(dof_report_text(&report)),
                OutputFormat::Json => to_json(&report),
                OutputFormat::Csv => Err(unsupported("estimate-dof", args.format)),
            }
        }
        Command::Region(args) => {
            let query = match (&args.check, args.vertices, args.boundary) {
                (Some(point), _, _) => RegionQuery::Check {
                    d1: point[0],
                    d2: point[1],
                    tol: args.tol,
                },
                (None, true, _) => RegionQuery::Vertices,
                (None, false, Some(n)) => RegionQuery::Boundary(n),
                (None, false, None) => {
                    return Err(Error::Config("region needs --check, --vertices or --boundary".into()))
                }
            };
            let output = cmd_region(query)?;
            match args.format {
                OutputFormat::Text | OutputFormat::Csv => Ok(region_text(&output)),
                OutputFormat::Json => to_json(&output),
            }
        }
        Command::Reproduce(args) => {
            let grid = parse_grid(&args.snr_db)?;
            let report = cmd_reproduce(&grid, args.trials, args.seed, args.tol)?;
            match args.format {
                OutputFormat::Text => Ok(reproduce_text(&report)),
                OutputFormat::Json => to_json(&report),
                OutputFormat::Csv => Err(unsupported("reproduce", args.format)),
            }
        }
    }
}

fn out_path(command: &Command) -> Option<&PathBuf> {
    match command {
        Command::Simulate(a) => a.run.out.as_ref(),
        Command::EstimateDof(a) => a.run.out.as_ref(),
        Command::Region(a) => a.out.as_ref(),
        Command::Reproduce(a) => a.out.as_ref(),
    }
}

/// Runs a command and writes its output to `--out` or standard output.
pub fn run(cli: &Cli) -> Result<()> {
    let text = execute(&cli.command)?;
    match out_path(&cli.command) {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::Config(format!("cannot write to standard output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("30:5:60").unwrap(), crate::estimator::DEFAULT_GRID_DB.to_vec());
        assert_eq!(parse_grid("10,20, 35").unwrap(), vec![10.0, 20.0, 35.0]);
        assert_eq!(parse_grid("-10:10:10").unwrap(), vec![-10.0, 0.0, 10.0]);
        assert_eq!(parse_grid("0:0.1:0.3").unwrap().len(), 4);
        assert!(parse_grid("30,20").is_err());
        assert!(parse_grid("30,30").is_err());
        assert!(parse_grid("30:0:60").is_err());
        assert!(parse_grid("60:5:30").is_err());
        assert!(parse_grid("a,b").is_err());
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("").is_err());
    }

    #[test]
    fn run_config_validation() {
        assert!(RunConfig::new(SchemeId::Bcc4Slot, vec![30.0], 0, 1).is_err());
        assert!(RunConfig::new(SchemeId::Bcc4Slot, vec![], 1, 1).is_err());
        assert!(RunConfig::new(SchemeId::Bcc4Slot, vec![40.0, 30.0], 1, 1).is_err());
    }

    #[test]
    fn region_queries() {
        let check = |d1, d2| match cmd_region(RegionQuery::Check { d1, d2, tol: 0.0 }).unwrap() {
            RegionOutput::Check { inside, .. } => inside,
            _ => unreachable!(),
        };
        assert!(check(0.5, 0.5));
        assert!(!check(1.0, 1.0));
        let text = region_text(&cmd_region(RegionQuery::Vertices).unwrap());
        assert_eq!(text.lines().count(), 5);
        assert!(text.contains("0.6666666666666666,0"));
        assert!(cmd_region(RegionQuery::Check { d1: 0.0, d2: 0.0, tol: -1.0 }).is_err());
    }

    #[test]
    fn simulate_rejects_incompatible_quantity() {
        let config = RunConfig::new(SchemeId::WiretapSymmetric3Slot, vec![30.0], 2, 1).unwrap();
        assert!(matches!(
            cmd_simulate(&config, Some(Quantity::LeakConditioned)),
            Err(Error::IncompatibleQuantity { .. })
        ));
    }

    #[test]
    fn csv_layout() {
        let config = RunConfig::new(SchemeId::Bcc4Slot, vec![30.0, 40.0], 3, 1).unwrap();
        let out = cmd_simulate(&config, None).unwrap();
        let csv = simulation_csv(&out).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "snr_db,quantity,rate_bits_per_use,std_err,trials");
        assert_eq!(lines.len(), 1 + 2 * 4);
        assert!(lines[1].starts_with("30.0,legit,"));
        assert!(lines[3].starts_with("30.0,leak_conditioned,"));
        assert!(lines[8].starts_with("40.0,secrecy,"));
        assert!(lines[1].ends_with(",3"));
    }

    #[test]
    fn cli_parses_flags() {
        let cli = Cli::try_parse_from([
            "sdof", "simulate", "--scheme", "bcc", "--snr-db", "30,40", "--trials", "7", "--seed",
            "9", "--format", "json", "--quantity", "secrecy",
        ])
        .unwrap();
        let Command::Simulate(args) = &cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(args.run.trials, 7);
        assert_eq!(args.format, OutputFormat::Json);
        let text = execute(&cli.command).unwrap();
        let parsed = parse_simulation_json(&text).unwrap();
        assert_eq!(parsed.rows.len(), 2);
        assert!(parsed.rows.iter().all(|r| r.quantity == Quantity::Secrecy));

        assert!(Cli::try_parse_from(["sdof", "region", "--check", "a", "0.5"]).is_err());
        assert!(Cli::try_parse_from(["sdof", "region"]).is_err());
        let cli = Cli::try_parse_from(["sdof", "region", "--check", "-0.01", "0", "--tol", "0.02"]).unwrap();
        assert_eq!(execute(&cli.command).unwrap(), "inside\n");
    }
}
