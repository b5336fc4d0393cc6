//! Parameter sweeps and the CSV they serialize to.
//!
//! Rows are evaluated independently (in parallel with the `parallel`
//! feature) and always emitted in grid order, so a given spec produces
//! byte-identical output. Non-finite numbers are written as
//! [`DIVERGENT`] and counted as warnings.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use crate::criticality::{
    critical_qd_tripartite, divergence_slope_fit, expansion_cc_qd_bipartite,
    expansion_cc_tripartite, expansion_eof_bipartite, log_offset_grid, standard_window,
    LARGE_ARGUMENT_OFFSET_BITS, LARGE_ARGUMENT_OFFSET_NATS,
};
use crate::error::{Error, Result};
use crate::measures::{
    bipartite_closed_form, eof_tripartite, evaluate, CorrelationReport, EminBranch, Measure,
    Units,
};
use crate::model::{Couplings, ModelPoint, Partition, PartitionKind};
use crate::oracle;
use crate::par;

pub const DIVERGENT: &str = "divergent";
pub const SWEEP_HEADER: &str = "h,cc,qd,eof,ln_neg,mutual_information,e_min,branch";
/// Smallest `|h - 1|` a log-offset grid may request; below this `1 ± x`
/// rounds back to 1.
pub const MIN_LOG_OFFSET: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HGrid {
    /// `count` evenly spaced fields; a point landing exactly on 1 is dropped.
    Linear { min: f64, max: f64, count: usize },
    /// `count` fields per side of `h = 1`, log-spaced in `|h - 1|` from
    /// `min_offset` to the distance to the range edge.
    LogOffset {
        min: f64,
        max: f64,
        min_offset: f64,
        count: usize,
    },
}

impl HGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        match *self {
            HGrid::Linear { min, max, count } => {
                check_range(min, max, count)?;
                let step = (max - min) / (count - 1) as f64;
                Ok((0..count)
                    .map(|i| if i + 1 == count { max } else { min + step * i as f64 })
                    .filter(|&h| h != 1.0)
                    .collect())
            }
            HGrid::LogOffset {
                min,
                max,
                min_offset,
                count,
            } => {
                check_range(min, max, count)?;
                if !(min_offset >= MIN_LOG_OFFSET) || !min_offset.is_finite() {
                    return Err(Error::InvalidSpec(format!(
                        "log offset must be >= {MIN_LOG_OFFSET:e}, got {min_offset}"
                    )));
                }
                let mut points = Vec::new();
                if min < 1.0 - min_offset {
                    let below = log_offset_grid(min_offset, 1.0 - min, count)?;
                    points.extend(below.iter().rev().map(|h| 2.0 - h));
                }
                if max > 1.0 + min_offset {
                    points.extend(log_offset_grid(min_offset, max - 1.0, count)?);
                }
                if points.is_empty() {
                    return Err(Error::InvalidSpec(format!(
                        "range [{min}, {max}] leaves no room for offsets >= {min_offset}"
                    )));
                }
                Ok(points)
            }
        }
    }
}

fn check_range(min: f64, max: f64, count: usize) -> Result<()> {
    if !(min.is_finite() && max.is_finite() && min >= 0.0 && max > min) {
        return Err(Error::InvalidSpec(format!(
            "field range must satisfy 0 <= h-min < h-max, got [{min}, {max}]"
        )));
    }
    if count < 2 {
        return Err(Error::InvalidSpec(format!("h-count must be >= 2, got {count}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub gamma: f64,
    pub partition: Partition,
    pub grid: HGrid,
    pub units: Units,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<Vec<f64>> {
        Couplings::new(self.gamma, 2.0).map_err(spec_error)?;
        ModelPoint::new(self.gamma, 2.0, self.partition).map_err(spec_error)?;
        self.grid.points()
    }
}

fn spec_error(e: Error) -> Error {
    match e {
        Error::InvalidSpec(_) => e,
        other => Error::InvalidSpec(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub h: f64,
    /// `[cc, qd, eof, ln_neg, mutual_information]` in the spec's units.
    pub values: [f64; 5],
    pub e_min: f64,
    pub branch: EminBranch,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let hs = spec.validate()?;
    par::map(&hs, |&h| {
        let report = evaluate(&ModelPoint::new(spec.gamma, h, spec.partition)?)?;
        Ok(SweepRow {
            h,
            values: report.values_in(spec.units),
            e_min: report.e_min,
            branch: report.branch,
        })
    })
    .into_iter()
    .collect()
}

/// CSV text plus the number of non-finite cells it contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Csv {
    pub text: String,
    pub rows: usize,
    pub warnings: usize,
}

/// Shortest round-trip scientific notation; non-finite values become
/// [`DIVERGENT`].
pub fn format_value(x: f64, warnings: &mut usize) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        *warnings += 1;
        DIVERGENT.to_string()
    }
}

struct CsvBuilder {
    text: String,
    rows: usize,
    warnings: usize,
}

impl CsvBuilder {
    fn new(header: &str) -> Self {
        CsvBuilder {
            text: format!("{header}\n"),
            rows: 0,
            warnings: 0,
        }
    }

    fn row(&mut self, numbers: &[f64], tail: &[&str]) {
        let mut cells: Vec<String> = numbers
            .iter()
            .map(|&x| format_value(x, &mut self.warnings))
            .collect();
        cells.extend(tail.iter().map(|s| s.to_string()));
        let _ = writeln!(self.text, "{}", cells.join(","));
        self.rows += 1;
    }

    fn finish(self) -> Csv {
        Csv {
            text: self.text,
            rows: self.rows,
            warnings: self.warnings,
        }
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> Csv {
    let mut csv = CsvBuilder::new(SWEEP_HEADER);
    for r in rows {
        let mut numbers = vec![r.h];
        numbers.extend_from_slice(&r.values);
        numbers.push(r.e_min);
        csv.row(&numbers, &[r.branch.label()]);
    }
    csv.finish()
}

/// One output file of a figure preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    /// File stem, e.g. `fig1_gamma0.5`.
    pub name: String,
    pub spec: SweepSpec,
}

fn linear_field(count: usize) -> HGrid {
    HGrid::Linear {
        min: 0.0,
        max: 2.0,
        count,
    }
}

/// Bipartition `τ₁ = 1/3` at `γ ∈ {0, 0.5}`.
pub fn fig1(grid: Option<HGrid>, units: Units) -> Vec<Series> {
    let grid = grid.unwrap_or(linear_field(201));
    [0.0, 0.5]
        .iter()
        .map(|&gamma| Series {
            name: format!("fig1_gamma{gamma}"),
            spec: SweepSpec {
                gamma,
                partition: Partition::Bipartite { tau1: 1.0 / 3.0 },
                grid,
                units,
            },
        })
        .collect()
}

/// Bipartitions `τ₁ ∈ {1/2, 1/6, 1/100}` at `γ = 0.5`.
pub fn fig2(grid: Option<HGrid>, units: Units) -> Vec<Series> {
    let grid = grid.unwrap_or(linear_field(201));
    [(0.5, "1_2"), (1.0 / 6.0, "1_6"), (0.01, "1_100")]
        .iter()
        .map(|&(tau1, label)| Series {
            name: format!("fig2_tau{label}"),
            spec: SweepSpec {
                gamma: 0.5,
                partition: Partition::Bipartite { tau1 },
                grid,
                units,
            },
        })
        .collect()
}

/// Equal tripartition `τ = 1/3` at `γ ∈ {0, 0.5}`.
pub fn fig3(grid: Option<HGrid>, units: Units) -> Vec<Series> {
    let grid = grid.unwrap_or(linear_field(201));
    [0.0, 0.5]
        .iter()
        .map(|&gamma| Series {
            name: format!("fig3_gamma{gamma}"),
            spec: SweepSpec {
                gamma,
                partition: Partition::Tripartite { tau: 1.0 / 3.0 },
                grid,
                units,
            },
        })
        .collect()
}

/// `τ ∈ {0.01, 0.02, …, 0.49}` plus `1/3` and points crowding `1/2`,
/// ascending.
pub fn fig4_taus() -> Vec<f64> {
    let mut taus: Vec<f64> = (1..=49).map(|i| i as f64 / 100.0).collect();
    taus.extend([1.0 / 3.0, 0.495, 0.499, 0.4995, 0.4999]);
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    taus
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig4Row {
    pub tau: f64,
    /// bits
    pub eof: f64,
    /// nats
    pub qd: f64,
}

/// Tripartite EoF and discord against `τ` at a fixed field.
pub fn run_fig4(gamma: f64, h: f64, taus: &[f64]) -> Result<Vec<Fig4Row>> {
    Couplings::new(gamma, h).map_err(spec_error)?;
    if h == 1.0 {
        return Err(Error::InvalidSpec(
            "fig4 needs a nonzero offset from h = 1".into(),
        ));
    }
    par::map(taus, |&tau| {
        let p = ModelPoint::tripartite(gamma, h, tau).map_err(spec_error)?;
        let r = evaluate(&p)?;
        Ok(Fig4Row {
            tau,
            eof: eof_tripartite(&p)?,
            qd: r.qd,
        })
    })
    .into_iter()
    .collect()
}

pub fn fig4_csv(rows: &[Fig4Row]) -> Csv {
    let mut csv = CsvBuilder::new("tau,eof,qd");
    for r in rows {
        csv.row(&[r.tau, r.eof, r.qd], &[]);
    }
    csv.finish()
}

/// One machine-readable verdict of `expand-check`.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub check: &'static str,
    pub measure: &'static str,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
}

impl CheckLine {
    pub fn pass(&self) -> bool {
        (self.observed - self.expected).abs() <= self.tolerance
    }
}

pub const SLOPE_TOLERANCE: f64 = 1e-3;
const OFFSET_TOLERANCE: f64 = 1e-2;
/// Field offset at which critical values are probed.
pub const CRITICAL_PROBE: f64 = 1e-8;

fn fitted_slope(gamma: f64, partition: Partition, measure: Measure) -> Result<f64> {
    let hs = standard_window();
    let reports: Vec<CorrelationReport> = par::map(&hs, |&h| {
        evaluate(&ModelPoint::new(gamma, h, partition)?)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    let ys: Vec<f64> = reports.iter().map(|r| measure.pick(r)).collect();
    Ok(divergence_slope_fit(&hs, &ys)?.slope)
}

/// Slope, offset and critical-value checks of the expansions against the
/// full formulas on the standard window.
pub fn expansion_checks(gamma: f64, partition: Partition) -> Result<Vec<CheckLine>> {
    ModelPoint::new(gamma, 2.0, partition).map_err(spec_error)?;
    let near = standard_window()[0];
    let mut lines = Vec::new();
    match partition {
        Partition::Bipartite { tau1 } => {
            for m in [Measure::Cc, Measure::Qd, Measure::LnNeg] {
                lines.push(CheckLine {
                    check: "slope",
                    measure: m.name(),
                    observed: fitted_slope(gamma, partition, m)?,
                    expected: -0.25,
                    tolerance: SLOPE_TOLERANCE,
                });
            }
            // bits per log2(h-1)
            lines.push(CheckLine {
                check: "slope",
                measure: Measure::Eof.name(),
                observed: fitted_slope(gamma, partition, Measure::Eof)? * LN_2,
                expected: -0.25,
                tolerance: SLOPE_TOLERANCE,
            });
            let r = evaluate(&ModelPoint::new(gamma, near, partition)?)?;
            lines.push(CheckLine {
                check: "offset",
                measure: Measure::Cc.name(),
                observed: r.cc - expansion_cc_qd_bipartite(gamma, tau1, near)?.value,
                expected: LARGE_ARGUMENT_OFFSET_NATS,
                tolerance: OFFSET_TOLERANCE,
            });
            lines.push(CheckLine {
                check: "offset",
                measure: Measure::Eof.name(),
                observed: r.eof - expansion_eof_bipartite(gamma, tau1, near)?.value,
                expected: LARGE_ARGUMENT_OFFSET_BITS,
                tolerance: OFFSET_TOLERANCE,
            });
        }
        Partition::Tripartite { tau } => {
            lines.push(CheckLine {
                check: "slope",
                measure: Measure::Cc.name(),
                observed: fitted_slope(gamma, partition, Measure::Cc)?,
                expected: -0.25,
                tolerance: SLOPE_TOLERANCE,
            });
            lines.push(CheckLine {
                check: "slope",
                measure: Measure::Qd.name(),
                observed: fitted_slope(gamma, partition, Measure::Qd)?,
                expected: 0.0,
                tolerance: SLOPE_TOLERANCE,
            });
            let probe = evaluate(&ModelPoint::new(gamma, 1.0 + CRITICAL_PROBE, partition)?)?;
            lines.push(CheckLine {
                check: "critical_value",
                measure: Measure::Qd.name(),
                observed: probe.qd,
                expected: critical_qd_tripartite(tau)?,
                tolerance: SLOPE_TOLERANCE,
            });
            let r = evaluate(&ModelPoint::new(gamma, near, partition)?)?;
            lines.push(CheckLine {
                check: "offset",
                measure: Measure::Cc.name(),
                observed: r.cc - expansion_cc_tripartite(gamma, tau, near)?.value,
                expected: LARGE_ARGUMENT_OFFSET_NATS,
                tolerance: OFFSET_TOLERANCE,
            });
        }
    }
    Ok(lines)
}

pub fn checks_csv(lines: &[CheckLine]) -> Csv {
    let mut csv = CsvBuilder::new("check,measure,observed,expected,tolerance,verdict");
    for l in lines {
        let verdict = if l.pass() { "pass" } else { "fail" };
        let mut w = 0;
        let cells = [
            l.check.to_string(),
            l.measure.to_string(),
            format_value(l.observed, &mut w),
            format_value(l.expected, &mut w),
            format_value(l.tolerance, &mut w),
            verdict.to_string(),
        ];
        let _ = writeln!(csv.text, "{}", cells.join(","));
        csv.rows += 1;
        csv.warnings += w;
    }
    csv.finish()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub n: usize,
    pub exact: f64,
    pub gaussian: f64,
}

impl OracleRow {
    pub fn abs_diff(&self) -> f64 {
        (self.exact - self.gaussian).abs()
    }
}

/// Exact finite-N value against the Gaussian thermodynamic limit: the
/// entanglement entropy (= CC = QD) for a bipartition, the mutual
/// information for a tripartition. At `h = 1` the Gaussian side is
/// infinite.
pub fn oracle_compare(
    gamma: f64,
    h: f64,
    partition: Partition,
    ns: &[usize],
) -> Result<Vec<OracleRow>> {
    ModelPoint::new(gamma, h, partition).map_err(spec_error)?;
    if ns.is_empty() {
        return Err(Error::InvalidSpec("empty N list".into()));
    }
    if let Some(&n) = ns.iter().find(|&&n| !(4..=oracle::dicke::MAX_SPINS).contains(&n)) {
        return Err(Error::InvalidSpec(format!(
            "N = {n} outside [4, {}]",
            oracle::dicke::MAX_SPINS
        )));
    }
    let gaussian = if h == 1.0 {
        f64::INFINITY
    } else {
        let p = ModelPoint::new(gamma, h, partition)?;
        match partition {
            Partition::Bipartite { .. } => bipartite_closed_form(&p)?,
            Partition::Tripartite { .. } => evaluate(&p)?.mutual_information,
        }
    };
    par::map(ns, |&n| {
        let state = oracle::exact_ground_state(n, gamma, h)?;
        let exact = match partition {
            Partition::Bipartite { tau1 } => {
                oracle::bipartite_entropy_exact(&state, oracle::group_size(n, tau1))?
            }
            Partition::Tripartite { tau } => {
                let g = oracle::group_size(n, tau);
                oracle::tripartite_reduced_exact(&state, g, g)?.mutual_information
            }
        };
        Ok(OracleRow { n, exact, gaussian })
    })
    .into_iter()
    .collect()
}

/// Rows whose `abs_diff` grew relative to the previous row.
pub fn monotonicity_violations(rows: &[OracleRow]) -> Vec<usize> {
    rows.windows(2)
        .filter(|w| w[1].abs_diff() > w[0].abs_diff())
        .map(|w| w[1].n)
        .collect()
}

pub fn oracle_csv(rows: &[OracleRow]) -> Csv {
    let mut csv = CsvBuilder::new("n,exact,gaussian,abs_diff");
    for r in rows {
        let mut w = 0;
        let cells = [
            r.n.to_string(),
            format_value(r.exact, &mut w),
            format_value(r.gaussian, &mut w),
            format_value(r.abs_diff(), &mut w),
        ];
        let _ = writeln!(csv.text, "{}", cells.join(","));
        csv.rows += 1;
        csv.warnings += w;
    }
    csv.finish()
}

pub fn partition_from(kind: PartitionKind, tau: f64) -> Result<Partition> {
    match kind {
        PartitionKind::Bipartite => Partition::bipartite(tau),
        PartitionKind::Tripartite => Partition::tripartite(tau),
    }
    .map_err(spec_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_grid_skips_critical_field() {
        let pts = HGrid::Linear { min: 0.0, max: 2.0, count: 5 }.points().unwrap();
        assert_eq!(pts, vec![0.0, 0.5, 1.5, 2.0]);
        assert!(HGrid::Linear { min: 0.0, max: 2.0, count: 1 }.points().is_err());
        assert!(HGrid::Linear { min: 2.0, max: 1.0, count: 5 }.points().is_err());
    }

    #[test]
    fn log_offset_grid_both_sides() {
        let pts = HGrid::LogOffset { min: 0.5, max: 2.0, min_offset: 1e-6, count: 4 }
            .points()
            .unwrap();
        assert_eq!(pts.len(), 8);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        assert!((pts[0] - 0.5).abs() < 1e-15 && pts[7] == 2.0);
        assert!((pts[3] - (1.0 - 1e-6)).abs() < 1e-15);
        assert!(pts.iter().all(|&h| h != 1.0));
        let above = HGrid::LogOffset { min: 1.0, max: 2.0, min_offset: 1e-6, count: 4 }
            .points()
            .unwrap();
        assert_eq!(above.len(), 4);
        assert!(HGrid::LogOffset { min: 0.5, max: 2.0, min_offset: 1e-20, count: 4 }
            .points()
            .is_err());
    }

    #[test]
    fn value_formatting() {
        let mut w = 0;
        assert_eq!(format_value(0.25, &mut w), "2.5e-1");
        assert_eq!(format_value(f64::INFINITY, &mut w), DIVERGENT);
        assert_eq!(format_value(f64::NAN, &mut w), DIVERGENT);
        assert_eq!(w, 2);
    }

    #[test]
    fn fig4_grid_shape() {
        let t = fig4_taus();
        assert_eq!(t.len(), 54);
        assert_eq!(t[0], 0.01);
        assert_eq!(*t.last().unwrap(), 0.4999);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
        assert!(t.contains(&(1.0 / 3.0)));
    }

    #[test]
    fn presets_name_their_series() {
        let names: Vec<String> = fig2(None, Units::Paper).into_iter().map(|s| s.name).collect();
        assert_eq!(names, ["fig2_tau1_2", "fig2_tau1_6", "fig2_tau1_100"]);
        assert_eq!(fig1(None, Units::Paper)[1].name, "fig1_gamma0.5");
        assert_eq!(fig3(None, Units::Paper)[0].name, "fig3_gamma0");
    }

    #[test]
    fn oracle_rows_flag_growth() {
        let rows = [
            OracleRow { n: 10, exact: 1.0, gaussian: 1.5 },
            OracleRow { n: 20, exact: 1.2, gaussian: 1.5 },
            OracleRow { n: 40, exact: 1.0, gaussian: 1.5 },
        ];
        assert_eq!(monotonicity_violations(&rows), vec![40]);
    }
}
