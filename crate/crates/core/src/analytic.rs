//! Closed-form Heisenberg-picture results for the clone/invert chain.
//!
//! Every equatorial mode evolves independently through
//! loss(eta1) -> squeeze(+g) -> loss(eta2) -> squeeze(-g) -> loss(eta3),
//! so the final annihilation operator is a linear combination of the input
//! mode and three vacuum modes (one per loss), with the middle vacuum
//! amplified by the inverse cloner. All quantities below follow from that
//! transform evaluated on the singlet input.
//!
//! Hyperbolic functions are evaluated directly. A non-finite result is
//! reported as [`AnalyticError::Overflow`] instead of leaking infinities into
//! sweep tables.

use serde::Serialize;

use crate::error::{AnalyticError, ParamError};
use crate::params::{CloneStats, ExperimentParams, WitnessReport};

/// Amplitudes of the composite mode transform
/// `a' = c_a a + c_loss1 c1 + c_mid_cosh c2 - c_mid_sinh c2^dag + c_loss3 c3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovCoeffs {
    pub c_a: f64,
    pub c_loss1: f64,
    pub c_mid_cosh: f64,
    pub c_mid_sinh: f64,
    pub c_loss3: f64,
}

impl BogoliubovCoeffs {
    /// `[a', a'^dag]`, which must equal 1 for a canonical transform.
    pub fn commutator(&self) -> f64 {
        self.c_a * self.c_a + self.c_loss1 * self.c_loss1 + self.c_mid_cosh * self.c_mid_cosh
            - self.c_mid_sinh * self.c_mid_sinh
            + self.c_loss3 * self.c_loss3
    }
}

fn finite(value: f64, gain: f64) -> Result<f64, AnalyticError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(AnalyticError::Overflow { gain })
    }
}

fn sinh_sq(g: f64) -> Result<f64, AnalyticError> {
    finite(g.sinh().powi(2), g)
}

fn require_matched(params: &ExperimentParams) -> Result<f64, AnalyticError> {
    if params.is_matched() {
        Ok(params.g1())
    } else {
        Err(AnalyticError::GainMismatch {
            g1: params.g1(),
            g2: params.g2(),
        })
    }
}

fn check_eta(name: &str, value: f64) -> Result<f64, AnalyticError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ParamError::OutOfRange {
            name: name.to_string(),
            value,
            allowed: "[0, 1]",
        }
        .into())
    }
}

/// Mode-transform amplitudes, using `g = g1` for both cloners.
pub fn bogoliubov_coeffs(params: &ExperimentParams) -> Result<BogoliubovCoeffs, AnalyticError> {
    let (e1, e2, e3, g) = (params.eta1(), params.eta2(), params.eta3(), params.g1());
    let mid = ((1.0 - e2) * e3).sqrt();
    Ok(BogoliubovCoeffs {
        c_a: (e1 * e2 * e3).sqrt(),
        c_loss1: ((1.0 - e1) * e2 * e3).sqrt(),
        c_mid_cosh: finite(mid * g.cosh(), g)?,
        c_mid_sinh: finite(mid * g.sinh(), g)?,
        c_loss3: (1.0 - e3).sqrt(),
    })
}

/// Final mean photon number in mode A: `eta1 eta2 eta3 + 2 (1 - eta2) eta3 sinh^2 g`.
pub fn mean_photon_final(params: &ExperimentParams) -> Result<f64, AnalyticError> {
    let g = require_matched(params)?;
    let (e1, e2, e3) = (params.eta1(), params.eta2(), params.eta3());
    finite(e1 * e2 * e3 + 2.0 * (1.0 - e2) * e3 * sinh_sq(g)?, g)
}

/// The `(xx, yy, zz)` Stokes correlators, each `-eta1 eta2 eta3` and
/// independent of the gain.
pub fn correlators(params: &ExperimentParams) -> Result<(f64, f64, f64), AnalyticError> {
    require_matched(params)?;
    let c = -params.eta1() * params.eta2() * params.eta3();
    Ok((c, c, c))
}

/// Witness value `2 (eta1 eta2 - (1 - eta2) sinh^2 g) eta3`.
///
/// Negative values are returned as-is: they mean "not proven entangled".
pub fn witness(params: &ExperimentParams) -> Result<f64, AnalyticError> {
    let g = require_matched(params)?;
    let (e1, e2, e3) = (params.eta1(), params.eta2(), params.eta3());
    finite(2.0 * (e1 * e2 - (1.0 - e2) * sinh_sq(g)?) * e3, g)
}

/// Correlators, photon number and witness assembled into one report.
pub fn witness_report(params: &ExperimentParams) -> Result<WitnessReport, AnalyticError> {
    let (xx, yy, zz) = correlators(params)?;
    Ok(WitnessReport::new(xx, yy, zz, mean_photon_final(params)?))
}

/// Mean number of photons in A after the first cloner,
/// `2 (1 + eta1) sinh^2 g1 + eta1`.
pub fn clone_number(params: &ExperimentParams) -> Result<CloneStats, AnalyticError> {
    let e1 = params.eta1();
    let n_clones = finite(2.0 * (1.0 + e1) * sinh_sq(params.g1())? + e1, params.g1())?;
    Ok(CloneStats { n_clones })
}

/// Witness expressed through the intermediate clone number.
pub fn witness_from_clones(
    eta1: f64,
    eta2: f64,
    eta3: f64,
    n_clones: f64,
) -> Result<f64, AnalyticError> {
    let (e1, e2, e3) = (
        check_eta("eta1", eta1)?,
        check_eta("eta2", eta2)?,
        check_eta("eta3", eta3)?,
    );
    if !(n_clones >= e1) {
        return Err(AnalyticError::Domain(format!(
            "clone number {n_clones} is below eta1 = {e1}, which no gain can produce"
        )));
    }
    Ok((e1 * (1.0 + e2 + 2.0 * e1 * e2) * e3 - (1.0 - e2) * e3 * n_clones) / (1.0 + e1))
}

/// `dW/d eta2`, written through the clone number of the first cloner.
pub fn sensitivity(params: &ExperimentParams) -> Result<f64, AnalyticError> {
    let (e1, e3) = (params.eta1(), params.eta3());
    let n_c = clone_number(params)?.n_clones;
    finite(
        e3 / (1.0 + e1) * n_c + e1 * e3 * (1.0 + 2.0 * e1) / (1.0 + e1),
        params.g1(),
    )
}

/// How a number returned by this module was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Exact consequence of the mode transform.
    ClosedForm,
    /// A leading-order claim stated without derivation; needs the oracle's
    /// mismatch scan before it is trusted.
    LeadingOrderClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MismatchWitness {
    /// Witness at matched gains `g1 = g2`.
    pub matched: f64,
    /// The claimed correction `-eta1 eta2 eta3 epsilon^2`.
    pub correction: f64,
    pub witness: f64,
    pub provenance: Provenance,
}

/// Witness for mismatched gains `g2 = g1 + epsilon`, using the claimed
/// quadratic correction `W' = W - eta1 eta2 eta3 epsilon^2`.
pub fn witness_mismatch(params: &ExperimentParams) -> Result<MismatchWitness, AnalyticError> {
    let matched = witness(&params.to_matched())?;
    let eps = params.epsilon();
    let correction = -params.eta1() * params.eta2() * params.eta3() * eps * eps;
    Ok(MismatchWitness {
        matched,
        correction,
        witness: matched + correction,
        provenance: Provenance::LeadingOrderClaim,
    })
}

/// Smallest intermediate transmission that keeps the witness positive:
/// `sinh^2 g / (eta1 + sinh^2 g)`. Independent of `eta3`.
pub fn entanglement_threshold(eta1: f64, g: f64) -> Result<f64, AnalyticError> {
    let e1 = check_eta("eta1", eta1)?;
    if !(g >= 0.0) {
        return Err(ParamError::OutOfRange {
            name: "g".into(),
            value: g,
            allowed: "[0, inf)",
        }
        .into());
    }
    let s = sinh_sq(g)?;
    if e1 + s == 0.0 {
        return Err(AnalyticError::Domain(
            "threshold undefined for eta1 = 0 and g = 0".into(),
        ));
    }
    finite(s / (e1 + s), g)
}

/// Clone number at which the witness equals `w_target`, for fixed
/// transmissions. Inverts [`witness_from_clones`].
pub fn clones_at_witness_level(
    eta1: f64,
    eta2: f64,
    eta3: f64,
    w_target: f64,
) -> Result<f64, AnalyticError> {
    let (e1, e2, e3) = (
        check_eta("eta1", eta1)?,
        check_eta("eta2", eta2)?,
        check_eta("eta3", eta3)?,
    );
    let denom = (1.0 - e2) * e3;
    if denom == 0.0 {
        return Err(AnalyticError::Divergent(format!(
            "witness does not depend on the clone number at eta2 = {e2}, eta3 = {e3}"
        )));
    }
    let n_c = (e1 * (1.0 + e2 + 2.0 * e1 * e2) * e3 - (1.0 + e1) * w_target) / denom;
    if !(n_c >= e1) {
        return Err(AnalyticError::NoSolution(format!(
            "witness level {w_target} is not reached for any clone number >= eta1 at eta2 = {e2}"
        )));
    }
    Ok(n_c)
}
