use rayon::prelude::*;
use serde::Serialize;

use crate::analytic;
use crate::error::{AnalyticError, ExperimentError};
use crate::fock::{
    run_pipeline, FockReport, TruncationDiagnostics, TruncationPolicy, DEFAULT_TAIL_TOL,
};
use crate::params::{ExperimentParams, WitnessReport};

/// Absolute differences between the closed-form engine and the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub params: ExperimentParams,
    pub tolerance: f64,
    pub diff_witness: f64,
    pub diff_n_a: f64,
    pub diff_n_clones: f64,
    pub diff_xx: f64,
    pub diff_yy: f64,
    pub diff_zz: f64,
    pub pass: bool,
    pub analytic: WitnessReport,
    pub analytic_n_clones: f64,
    pub oracle: FockReport,
    pub truncation: TruncationDiagnostics,
}

impl DiscrepancyReport {
    pub fn max_diff(&self) -> f64 {
        [
            self.diff_witness,
            self.diff_n_a,
            self.diff_n_clones,
            self.diff_xx,
            self.diff_yy,
            self.diff_zz,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Policy sized for the larger of the two gains at the default tail tolerance.
pub fn default_policy(params: &ExperimentParams) -> TruncationPolicy {
    TruncationPolicy::sized_for_gain(params.g1().max(params.g2()), DEFAULT_TAIL_TOL)
}

/// Runs both engines on matched-gain `params` and reports per-quantity
/// discrepancies.
pub fn oracle_compare(
    params: &ExperimentParams,
    policy: TruncationPolicy,
    tolerance: f64,
) -> Result<DiscrepancyReport, ExperimentError> {
    if !params.is_matched() {
        return Err(AnalyticError::GainMismatch {
            g1: params.g1(),
            g2: params.g2(),
        }
        .into());
    }
    let analytic = analytic::witness_report(params)?;
    let analytic_n_clones = analytic::clone_number(params)?.n_clones;
    let oracle = run_pipeline(params, policy)?;
    let o = &oracle.report;
    let diff_witness = (analytic.witness - o.witness).abs();
    let diff_n_a = (analytic.n_a - o.n_a).abs();
    let diff_n_clones = (analytic_n_clones - oracle.n_clones_measured).abs();
    let diff_xx = (analytic.corr_xx - o.corr_xx).abs();
    let diff_yy = (analytic.corr_yy - o.corr_yy).abs();
    let diff_zz = (analytic.corr_zz - o.corr_zz).abs();
    let pass = [
        diff_witness,
        diff_n_a,
        diff_n_clones,
        diff_xx,
        diff_yy,
        diff_zz,
    ]
    .iter()
    .all(|d| *d <= tolerance);
    Ok(DiscrepancyReport {
        params: *params,
        tolerance,
        diff_witness,
        diff_n_a,
        diff_n_clones,
        diff_xx,
        diff_yy,
        diff_zz,
        pass,
        analytic,
        analytic_n_clones,
        truncation: oracle.truncation,
        oracle,
    })
}

/// `eta1, eta2, eta3 in {0.7, 0.9, 1.0}` crossed with `g in {0, 0.3, 0.7, 1.0}`.
pub fn validation_grid() -> Vec<ExperimentParams> {
    const ETAS: [f64; 3] = [0.7, 0.9, 1.0];
    const GAINS: [f64; 4] = [0.0, 0.3, 0.7, 1.0];
    let mut grid = Vec::with_capacity(108);
    for e1 in ETAS {
        for e2 in ETAS {
            for e3 in ETAS {
                for g in GAINS {
                    grid.push(
                        ExperimentParams::matched(e1, e2, e3, g).expect("grid values are valid"),
                    );
                }
            }
        }
    }
    grid
}

/// [`oracle_compare`] over many `(params, policy)` jobs in parallel;
/// results keep input order.
pub fn compare_many(
    jobs: &[(ExperimentParams, TruncationPolicy)],
    tolerance: f64,
) -> Vec<Result<DiscrepancyReport, ExperimentError>> {
    super::thread_pool().install(|| {
        jobs.par_iter()
            .map(|(p, policy)| oracle_compare(p, *policy, tolerance))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::FockError;

    #[test]
    fn lossless_point_passes() {
        let p = ExperimentParams::matched(1.0, 1.0, 1.0, 0.5).unwrap();
        let r = oracle_compare(&p, default_policy(&p), 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.max_diff() <= 1e-8);
    }

    #[test]
    fn core_validation_point() {
        let p = ExperimentParams::matched(0.8, 0.98, 0.8, 1.0).unwrap();
        let r = oracle_compare(&p, default_policy(&p), 1e-8).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn pass_flag_follows_tolerance() {
        let p = ExperimentParams::matched(0.9, 0.9, 0.9, 0.3).unwrap();
        let r = oracle_compare(&p, default_policy(&p), 0.0).unwrap();
        assert_eq!(r.pass, r.max_diff() == 0.0);
    }

    #[test]
    fn large_gain_is_out_of_reach() {
        let p = ExperimentParams::matched(0.9, 0.9, 0.9, 5.0).unwrap();
        let err = oracle_compare(&p, default_policy(&p), 1e-8).unwrap_err();
        assert!(matches!(
            err,
            ExperimentError::Fock(FockError::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn mismatched_gains_rejected() {
        let p = ExperimentParams::new(0.9, 0.9, 0.9, 0.3, 0.4).unwrap();
        assert!(oracle_compare(&p, default_policy(&p), 1e-8).is_err());
    }

    #[test]
    fn grid_shape() {
        assert_eq!(validation_grid().len(), 108);
    }
}
