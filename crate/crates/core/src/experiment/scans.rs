use rayon::prelude::*;
use serde::Serialize;

use super::compare::default_policy;
use super::fit::{loglog_slope, polyfit};
use super::{thread_pool, ScanAxis, ScanSpec, Target};
use crate::analytic;
use crate::error::{ExperimentError, FockError};
use crate::fock::run_pipeline;
use crate::params::ExperimentParams;
use crate::table::SweepTable;

/// Bound on the fitted linear coefficient of the oracle witness in `epsilon`.
pub const MISMATCH_LINEAR_TOL: f64 = 1e-4;

fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    thread_pool().install(|| items.par_iter().map(f).collect())
}

/// Clone number needed to reach each witness level, one row per `eta2`.
///
/// Levels that no clone number reaches leave an empty cell.
pub fn figure2_sweep(spec: &ScanSpec) -> Result<SweepTable, ExperimentError> {
    let range = spec.range(ScanAxis::Eta2)?;
    if !(range.min() > 0.0 && range.max() < 1.0) {
        return Err(ExperimentError::Scan(format!(
            "eta2 range {range} must lie inside (0, 1)"
        )));
    }
    if spec.witness_levels.is_empty() {
        return Err(ExperimentError::Scan(
            "at least one witness level is required".into(),
        ));
    }
    spec.validate()?;
    let (e1, e3) = (spec.base.eta1(), spec.base.eta3());
    let mut columns = vec!["eta2".to_string()];
    columns.extend(spec.witness_levels.iter().map(|w| format!("n_c_w{w}")));
    let mut meta = spec.metadata("figure2");
    meta.fixed.remove("eta2");
    meta.fixed.remove("g1");
    meta.fixed.remove("g2");
    let mut table = SweepTable::new(columns, meta);
    let etas = range.values();
    let rows = par_map(&etas, |&e2| {
        let mut row = vec![Some(e2)];
        for &w in &spec.witness_levels {
            row.push(analytic::clones_at_witness_level(e1, e2, e3, w).ok());
        }
        row
    });
    for row in rows {
        table.push_row(row).expect("row width matches columns");
    }
    Ok(table)
}

/// Quadratic fit `c0 + c1 eps + c2 eps^2` of the oracle witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MismatchFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// `-eta1 eta2 eta3`, the claimed curvature.
    pub claimed_c2: f64,
    pub c2_ratio: f64,
    pub linear_within_tol: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MismatchScan {
    pub table: SweepTable,
    /// `None` when fewer than three oracle cells succeeded.
    pub fit: Option<MismatchFit>,
    /// Truncation failures, by `epsilon`.
    pub failures: Vec<(f64, FockError)>,
}

/// Claimed quadratic-correction witness against the oracle, over `epsilon`.
pub fn mismatch_scan(spec: &ScanSpec) -> Result<MismatchScan, ExperimentError> {
    let range = spec.range(ScanAxis::Epsilon)?;
    spec.validate()?;
    let base = spec.base.to_matched();
    let eps_values = range.values();
    let cells = par_map(&eps_values, |&eps| -> Result<_, ExperimentError> {
        let p = base.with_epsilon(eps)?;
        let claimed = analytic::witness_mismatch(&p)?.witness;
        let oracle = match run_pipeline(&p, default_policy(&p)) {
            Ok(r) => Ok(r.report.witness),
            Err(e) => Err(e),
        };
        Ok((eps, claimed, oracle))
    });

    let mut meta = spec.metadata("mismatch");
    meta.fixed.remove("g2");
    let mut table = SweepTable::new(["eps", "w_claimed", "w_oracle", "difference"], meta);
    let mut failures = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for cell in cells {
        let (eps, claimed, oracle) = cell?;
        let w = match oracle {
            Ok(w) => {
                xs.push(eps);
                ys.push(w);
                Some(w)
            }
            Err(e) => {
                failures.push((eps, e));
                None
            }
        };
        table
            .push_row(vec![Some(eps), Some(claimed), w, w.map(|w| claimed - w)])
            .expect("four columns");
    }

    let claimed_c2 = -base.eta1() * base.eta2() * base.eta3();
    let fit = polyfit(&xs, &ys, 2).map(|c| MismatchFit {
        c0: c[0],
        c1: c[1],
        c2: c[2],
        claimed_c2,
        c2_ratio: c[2] / claimed_c2,
        linear_within_tol: c[1].abs() < MISMATCH_LINEAR_TOL,
    });
    let summary = &mut table.metadata.summary;
    summary.insert("claimed_c2".into(), claimed_c2);
    if let Some(f) = fit {
        summary.insert("fit_c0".into(), f.c0);
        summary.insert("fit_c1".into(), f.c1);
        summary.insert("fit_c2".into(), f.c2);
        summary.insert("c2_ratio".into(), f.c2_ratio);
        summary.insert("linear_tol".into(), MISMATCH_LINEAR_TOL);
    }
    for (eps, e) in &failures {
        table.metadata.notes.push(format!("eps = {eps}: {e}"));
    }
    Ok(MismatchScan {
        table,
        fit,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityScan {
    pub table: SweepTable,
    /// Log-log slope of `deta2_min` against the clone number.
    pub slope: Option<f64>,
    /// Log-log slope of `1/sqrt(N)` against the clone number.
    pub classical_slope: Option<f64>,
}

/// Smallest resolvable `eta2` change over a range of gains.
pub fn sensitivity_scan(spec: &ScanSpec) -> Result<SensitivityScan, ExperimentError> {
    let range = spec.range(ScanAxis::G1)?;
    let dw = spec
        .delta_w_min
        .ok_or_else(|| ExperimentError::Scan("sensitivity scan needs delta_w_min".into()))?;
    spec.validate()?;
    let base = spec.base.to_matched();
    let gains = range.values();
    let cells = par_map(&gains, |&g| -> Result<_, ExperimentError> {
        let p = base.with_gain(g)?;
        let n = analytic::clone_number(&p)?.n_clones;
        let s = analytic::sensitivity(&p)?;
        Ok([g, n, s, dw / s, 1.0 / n.sqrt()])
    });
    let mut meta = spec.metadata("sensitivity");
    meta.fixed.remove("g2");
    let mut table = SweepTable::new(
        ["g1", "n_clones", "dw_deta2", "deta2_min", "classical"],
        meta,
    );
    let (mut n, mut d, mut c) = (Vec::new(), Vec::new(), Vec::new());
    for cell in cells {
        let row = cell?;
        n.push(row[1]);
        d.push(row[3]);
        c.push(row[4]);
        table
            .push_row(row.iter().copied().map(Some).collect())
            .expect("five columns");
    }
    let slope = loglog_slope(&n, &d);
    let classical_slope = loglog_slope(&n, &c);
    if let Some(s) = slope {
        table.metadata.summary.insert("loglog_slope".into(), s);
    }
    if let Some(s) = classical_slope {
        table.metadata.summary.insert("classical_slope".into(), s);
    }
    Ok(SensitivityScan {
        table,
        slope,
        classical_slope,
    })
}

fn evaluate(target: Target, p: &ExperimentParams) -> Option<f64> {
    match target {
        Target::Witness => analytic::witness(p).ok(),
        Target::MeanPhoton => analytic::mean_photon_final(p).ok(),
        Target::CloneNumber => analytic::clone_number(p).ok().map(|c| c.n_clones),
        Target::Sensitivity => analytic::sensitivity(p).ok(),
        Target::Threshold => analytic::entanglement_threshold(p.eta1(), p.g1()).ok(),
        Target::MismatchWitness => analytic::witness_mismatch(p).ok().map(|m| m.witness),
    }
}

/// Cartesian sweep over every range in `spec`, tabulating its targets with
/// the closed-form engine. The first axis varies slowest.
pub fn grid_sweep(spec: &ScanSpec) -> Result<SweepTable, ExperimentError> {
    if spec.ranges.is_empty() {
        return Err(ExperimentError::Scan(
            "grid sweep needs at least one range".into(),
        ));
    }
    if spec.targets.is_empty() {
        return Err(ExperimentError::Scan(
            "grid sweep needs at least one target".into(),
        ));
    }
    spec.validate()?;
    let axes: Vec<(ScanAxis, Vec<f64>)> =
        spec.ranges.iter().map(|(a, r)| (*a, r.values())).collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for (_, values) in &axes {
        points = points
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(*v);
                    next
                })
            })
            .collect();
    }
    let rows = par_map(
        &points,
        |coords| -> Result<Vec<Option<f64>>, ExperimentError> {
            let mut p = spec.base;
            for ((axis, _), v) in axes.iter().zip(coords) {
                p = axis.set(&p, *v)?;
            }
            let mut row: Vec<Option<f64>> = coords.iter().copied().map(Some).collect();
            row.extend(spec.targets.iter().map(|t| evaluate(*t, &p)));
            Ok(row)
        },
    );
    let mut columns: Vec<String> = axes.iter().map(|(a, _)| a.name().to_string()).collect();
    columns.extend(spec.targets.iter().map(|t| t.name().to_string()));
    let mut table = SweepTable::new(columns, spec.metadata("sweep"));
    for row in rows {
        table.push_row(row?).expect("row width matches columns");
    }
    Ok(table)
}
