use serde::Serialize;

use super::channels::squeeze_modes;
use super::measure::{measure_witness_in, SecondMoments};
use super::{
    build_initial_state, FockState, LossChannel, MeasurementBasis, Mode, TruncationPolicy,
};
use crate::error::FockError;
use crate::params::{ExperimentParams, WitnessReport};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationDiagnostics {
    pub n_max: usize,
    pub tail_tol: f64,
    pub max_tail_population: f64,
    pub trace_drift: f64,
    pub final_trace: f64,
}

impl TruncationDiagnostics {
    fn of(state: &FockState) -> Self {
        Self {
            n_max: state.n_max(),
            tail_tol: state.policy().tail_tol,
            max_tail_population: state.max_tail_population(),
            trace_drift: state.trace_drift(),
            final_trace: state.trace().re,
        }
    }
}

/// Oracle measurement at the end of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockReport {
    #[serde(flatten)]
    pub report: WitnessReport,
    /// `<N^A>` right after the first cloner.
    pub n_clones_measured: f64,
    pub truncation: TruncationDiagnostics,
}

fn lose(eta: f64, mut state: FockState) -> FockState {
    if eta != 1.0 {
        let ch = LossChannel::new(eta, state.dim());
        for mode in Mode::BOTH {
            ch.apply(&mut state, mode);
        }
    }
    state
}

/// Evolves the singlet through
/// `loss(eta1) -> squeeze(+g1) -> loss(eta2) -> squeeze(-g2) -> loss(eta3)`
/// on both A modes and measures the witness in the `phi = 0` basis.
pub fn run_pipeline(
    params: &ExperimentParams,
    policy: TruncationPolicy,
) -> Result<FockReport, FockError> {
    run_pipeline_in(params, policy, MeasurementBasis::default())
}

/// [`run_pipeline`] with the measurement rebuilt for another equatorial pair.
pub fn run_pipeline_in(
    params: &ExperimentParams,
    policy: TruncationPolicy,
    basis: MeasurementBasis,
) -> Result<FockReport, FockError> {
    evolve(params, policy, basis).map(|(report, _)| report)
}

/// [`run_pipeline`] that also hands back the final state.
pub fn run_pipeline_with_state(
    params: &ExperimentParams,
    policy: TruncationPolicy,
) -> Result<(FockReport, FockState), FockError> {
    evolve(params, policy, MeasurementBasis::default())
}

fn evolve(
    params: &ExperimentParams,
    policy: TruncationPolicy,
    basis: MeasurementBasis,
) -> Result<(FockReport, FockState), FockError> {
    let state = build_initial_state(policy)?;
    let state = lose(params.eta1(), state);
    let state =
        squeeze_modes(params.g1(), state, &Mode::BOTH).map_err(|e| e.at_stage("squeeze(+g1)"))?;
    let n_clones_measured = SecondMoments::of(&state).photon_number();
    let state = lose(params.eta2(), state);
    let state =
        squeeze_modes(-params.g2(), state, &Mode::BOTH).map_err(|e| e.at_stage("squeeze(-g2)"))?;
    let state = lose(params.eta3(), state);
    let report = FockReport {
        report: measure_witness_in(&state, basis),
        n_clones_measured,
        truncation: TruncationDiagnostics::of(&state),
    };
    Ok((report, state))
}
