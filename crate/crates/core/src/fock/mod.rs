//! Truncated Fock-space oracle.
//!
//! The state is the full density operator of two equatorial A modes
//! (`a`, `a_perp`) and the single-photon B qubit. It is evolved in the
//! Schrödinger picture through squeezers and pure-loss channels, and the
//! witness is measured from operator traces. None of the closed-form
//! results in [`crate::analytic`] are used here.

mod channels;
mod measure;
mod pipeline;
mod state;

pub use channels::{apply_loss, apply_squeezer, LossChannel, Squeezer};
pub use measure::{measure_witness, measure_witness_in, Axis, MeasurementBasis, SecondMoments};
pub use pipeline::{
    run_pipeline, run_pipeline_in, run_pipeline_with_state, FockReport, TruncationDiagnostics,
};
pub use state::{build_initial_state, FockState, Term};

use serde::Serialize;

use crate::error::FockError;

/// One of the two equatorial A modes of the simulation basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    A,
    APerp,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::A, Mode::APerp];

    pub fn label(self) -> &'static str {
        match self {
            Mode::A => "a",
            Mode::APerp => "a_perp",
        }
    }
}

/// Default bound on the population of the two highest Fock levels.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;
/// Extra levels used when exponentiating the squeezing generator.
pub const DEFAULT_SQUEEZE_MARGIN: usize = 8;
/// Largest per-mode cutoff the oracle will grow to.
pub const DEFAULT_N_MAX_CEILING: usize = 200;

/// Fock cutoff and tail control.
///
/// `n_max` is the highest retained photon number per A mode. After every
/// squeezer the population of levels `n_max - 1` and `n_max` of the squeezed
/// mode must stay below `tail_tol`; otherwise the cutoff is doubled (when
/// `auto_grow` is set, never beyond `n_max_ceiling`) or the run fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationPolicy {
    pub n_max: usize,
    pub tail_tol: f64,
    pub auto_grow: bool,
    pub squeeze_margin: usize,
    pub n_max_ceiling: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            n_max: 16,
            tail_tol: DEFAULT_TAIL_TOL,
            auto_grow: true,
            squeeze_margin: DEFAULT_SQUEEZE_MARGIN,
            n_max_ceiling: DEFAULT_N_MAX_CEILING,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<(), FockError> {
        if self.n_max < 1 {
            return Err(FockError::InvalidPolicy("n_max must be at least 1".into()));
        }
        if !(self.tail_tol > 0.0) {
            return Err(FockError::InvalidPolicy("tail_tol must be positive".into()));
        }
        if self.n_max_ceiling < self.n_max {
            return Err(FockError::InvalidPolicy(format!(
                "n_max {} exceeds the ceiling {}",
                self.n_max, self.n_max_ceiling
            )));
        }
        Ok(())
    }

    /// Cutoff sized for squeezing strength `g`.
    ///
    /// A squeezed vacuum has level populations falling like `tanh(g)^n`; a
    /// single-photon seed adds a factor of order `n`. The cutoff is the
    /// smallest `n` with `n tanh(g)^n < tail_tol`, clamped to the ceiling.
    pub fn sized_for_gain(g: f64, tail_tol: f64) -> Self {
        let base = Self {
            tail_tol,
            ..Self::default()
        };
        let t = g.abs().tanh();
        let n_max = if t == 0.0 {
            3
        } else if t >= 1.0 {
            base.n_max_ceiling
        } else {
            let ln_t = t.ln();
            let n0 = (tail_tol.ln() / ln_t).ceil().max(1.0);
            let n1 = ((tail_tol.ln() - n0.ln()) / ln_t).ceil();
            (n1 as usize + 4).clamp(4, base.n_max_ceiling)
        };
        Self { n_max, ..base }
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }
}
