//! `lmgcorr`: correlation sweeps, figure data, expansion checks and oracle
//! comparisons for the LMG model, written as CSV.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid specification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lmg_correlations::sweep::{self, Csv, HGrid, Series, SweepSpec};
use lmg_correlations::{Error, PartitionKind, Units};

#[derive(Parser)]
#[command(name = "lmgcorr", version, about = "Gaussian-limit correlations of the LMG model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every measure over a field grid.
    Sweep(SweepArgs),
    /// Bipartition tau1 = 1/3 at gamma = 0 and 0.5 (one CSV per gamma).
    Fig1(PresetArgs),
    /// Bipartitions tau1 = 1/2, 1/6, 1/100 at gamma = 0.5.
    Fig2(PresetArgs),
    /// Equal tripartition tau = 1/3 at gamma = 0 and 0.5.
    Fig3(PresetArgs),
    /// Tripartite EoF and discord against tau next to h = 1.
    Fig4(Fig4Args),
    /// Fit divergence slopes and compare with the critical expansions.
    ExpandCheck(ExpandArgs),
    /// Exact finite-N values against the Gaussian limit.
    OracleCompare(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PartitionArg {
    Bi,
    Tri,
}

impl From<PartitionArg> for PartitionKind {
    fn from(p: PartitionArg) -> Self {
        match p {
            PartitionArg::Bi => PartitionKind::Bipartite,
            PartitionArg::Tri => PartitionKind::Tripartite,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitsArg {
    /// nats, with the entanglement of formation in bits
    Paper,
    Nats,
    Bits,
}

impl From<UnitsArg> for Units {
    fn from(u: UnitsArg) -> Self {
        match u {
            UnitsArg::Paper => Units::Paper,
            UnitsArg::Nats => Units::Nats,
            UnitsArg::Bits => Units::Bits,
        }
    }
}

/// Accepts decimals and simple fractions such as `1/3`.
fn parse_number(s: &str) -> Result<f64, String> {
    let parsed = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
            a / b
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if parsed.is_finite() {
        Ok(parsed)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

#[derive(Args, Clone)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0, value_parser = parse_number)]
    h_min: f64,
    #[arg(long, default_value_t = 2.0, value_parser = parse_number)]
    h_max: f64,
    /// Points in a linear grid, or points per side of h = 1 with --h-log-offset.
    #[arg(long, default_value_t = 201)]
    h_count: usize,
    /// Log-space |h - 1| from this smallest offset out to the range edges.
    #[arg(long, value_parser = parse_number)]
    h_log_offset: Option<f64>,
}

impl GridArgs {
    fn grid(&self) -> HGrid {
        match self.h_log_offset {
            Some(min_offset) => HGrid::LogOffset {
                min: self.h_min,
                max: self.h_max,
                min_offset,
                count: self.h_count,
            },
            None => HGrid::Linear {
                min: self.h_min,
                max: self.h_max,
                count: self.h_count,
            },
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_parser = parse_number)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "bi")]
    partition: PartitionArg,
    /// tau1 for a bipartition, tau = tau1 = tau3 for a tripartition.
    #[arg(long, value_parser = parse_number)]
    tau: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "paper")]
    units: UnitsArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PresetArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "paper")]
    units: UnitsArg,
}

#[derive(Args)]
struct Fig4Args {
    #[arg(long, default_value_t = 0.5, value_parser = parse_number)]
    gamma: f64,
    /// Distance from the critical field.
    #[arg(long, default_value_t = 1e-8, value_parser = parse_number)]
    h_offset: f64,
    /// Evaluate at h = 1 - offset instead of 1 + offset.
    #[arg(long)]
    below: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(long, value_parser = parse_number)]
    gamma: f64,
    #[arg(long, value_enum, default_value = "bi")]
    partition: PartitionArg,
    #[arg(long, value_parser = parse_number)]
    tau: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_parser = parse_number)]
    gamma: f64,
    #[arg(long, value_parser = parse_number)]
    h: f64,
    #[arg(long, value_enum, default_value = "bi")]
    partition: PartitionArg,
    #[arg(long, value_parser = parse_number)]
    tau: f64,
    /// Comma-separated spin numbers, e.g. 64,128,256.
    #[arg(long, value_delimiter = ',', default_value = "64,128,256")]
    n_list: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Spec(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) | Error::InvalidParameter(_) | Error::InvalidPartition(_) => {
                Failure::Spec(e.to_string())
            }
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Internal(format!("i/o: {e}"))
    }
}

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Failure::from(e.error))?;
    Ok(())
}

fn emit(csv: &Csv, out: Option<&Path>) -> Result<usize, Failure> {
    match out {
        Some(path) => {
            write_atomic(path, &csv.text)?;
            eprintln!(
                "wrote {} rows to {} ({} warnings)",
                csv.rows,
                path.display(),
                csv.warnings
            );
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(csv.text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(csv.warnings)
}

fn run_preset(series: Vec<Series>, out: &Path) -> Result<usize, Failure> {
    // validate everything before touching the file system
    let mut results = Vec::new();
    for s in &series {
        results.push((s, sweep::run_sweep(&s.spec)?));
    }
    std::fs::create_dir_all(out)?;
    let mut warnings = 0;
    for (s, rows) in results {
        let csv = sweep::sweep_csv(&rows);
        warnings += emit(&csv, Some(&out.join(format!("{}.csv", s.name))))?;
    }
    Ok(warnings)
}

fn run(cli: Cli) -> Result<usize, Failure> {
    match cli.command {
        Command::Sweep(a) => {
            let spec = SweepSpec {
                gamma: a.gamma,
                partition: sweep::partition_from(a.partition.into(), a.tau)?,
                grid: a.grid.grid(),
                units: a.units.into(),
            };
            let rows = sweep::run_sweep(&spec)?;
            emit(&sweep::sweep_csv(&rows), a.out.as_deref())
        }
        Command::Fig1(a) => run_preset(sweep::fig1(Some(a.grid.grid()), a.units.into()), &a.out),
        Command::Fig2(a) => run_preset(sweep::fig2(Some(a.grid.grid()), a.units.into()), &a.out),
        Command::Fig3(a) => run_preset(sweep::fig3(Some(a.grid.grid()), a.units.into()), &a.out),
        Command::Fig4(a) => {
            if !(a.h_offset > 0.0) {
                return Err(Failure::Spec(format!(
                    "h-offset must be positive, got {}",
                    a.h_offset
                )));
            }
            let h = if a.below { 1.0 - a.h_offset } else { 1.0 + a.h_offset };
            let rows = sweep::run_fig4(a.gamma, h, &sweep::fig4_taus())?;
            emit(&sweep::fig4_csv(&rows), a.out.as_deref())
        }
        Command::ExpandCheck(a) => {
            let partition = sweep::partition_from(a.partition.into(), a.tau)?;
            let lines = sweep::expansion_checks(a.gamma, partition)?;
            let failed = lines.iter().filter(|l| !l.pass()).count();
            let warnings = emit(&sweep::checks_csv(&lines), a.out.as_deref())?;
            eprintln!("{} checks, {failed} failed", lines.len());
            Ok(warnings)
        }
        Command::OracleCompare(a) => {
            let partition = sweep::partition_from(a.partition.into(), a.tau)?;
            let rows = sweep::oracle_compare(a.gamma, a.h, partition, &a.n_list)?;
            let violations = sweep::monotonicity_violations(&rows);
            if !violations.is_empty() {
                eprintln!("warning: |exact - gaussian| grew at N = {violations:?}");
            }
            let warnings = emit(&sweep::oracle_csv(&rows), a.out.as_deref())?;
            Ok(warnings + violations.len())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(warnings) => {
            if warnings > 0 {
                eprintln!("{warnings} warnings");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Spec(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
