//! Experiment configuration and the result containers shared by the
//! analytic engine and the Fock-space oracle.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::ParamError;

/// Full configuration of one clone-then-invert run.
///
/// `eta1`, `eta2`, `eta3` are the transmissions before the cloner, between
/// cloner and inverse cloner, and after the inverse cloner. `g1` is the
/// cloner gain and `g2` the inverse-cloner gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentParams {
    eta1: f64,
    eta2: f64,
    eta3: f64,
    g1: f64,
    g2: f64,
}

fn check_eta(name: &str, value: f64) -> Result<f64, ParamError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(ParamError::OutOfRange {
            name: name.to_string(),
            value,
            allowed: "[0, 1]",
        })
    }
}

fn check_gain(name: &str, value: f64) -> Result<f64, ParamError> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(ParamError::OutOfRange {
            name: name.to_string(),
            value,
            allowed: "[0, inf)",
        })
    }
}

impl ExperimentParams {
    pub fn new(eta1: f64, eta2: f64, eta3: f64, g1: f64, g2: f64) -> Result<Self, ParamError> {
        Ok(Self {
            eta1: check_eta("eta1", eta1)?,
            eta2: check_eta("eta2", eta2)?,
            eta3: check_eta("eta3", eta3)?,
            g1: check_gain("g1", g1)?,
            g2: check_gain("g2", g2)?,
        })
    }

    /// Matched cloner and inverse-cloner gains.
    pub fn matched(eta1: f64, eta2: f64, eta3: f64, g: f64) -> Result<Self, ParamError> {
        Self::new(eta1, eta2, eta3, g, g)
    }

    /// The lossless, gainless configuration.
    pub fn identity() -> Self {
        Self {
            eta1: 1.0,
            eta2: 1.0,
            eta3: 1.0,
            g1: 0.0,
            g2: 0.0,
        }
    }

    pub fn eta1(&self) -> f64 {
        self.eta1
    }

    pub fn eta2(&self) -> f64 {
        self.eta2
    }

    pub fn eta3(&self) -> f64 {
        self.eta3
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    /// Gain mismatch `g2 - g1`.
    pub fn epsilon(&self) -> f64 {
        self.g2 - self.g1
    }

    pub fn is_matched(&self) -> bool {
        self.g1 == self.g2
    }

    pub fn with_eta1(&self, eta1: f64) -> Result<Self, ParamError> {
        Self::new(eta1, self.eta2, self.eta3, self.g1, self.g2)
    }

    pub fn with_eta2(&self, eta2: f64) -> Result<Self, ParamError> {
        Self::new(self.eta1, eta2, self.eta3, self.g1, self.g2)
    }

    pub fn with_eta3(&self, eta3: f64) -> Result<Self, ParamError> {
        Self::new(self.eta1, self.eta2, eta3, self.g1, self.g2)
    }

    /// Sets both gains to `g`.
    pub fn with_gain(&self, g: f64) -> Result<Self, ParamError> {
        Self::new(self.eta1, self.eta2, self.eta3, g, g)
    }

    /// Keeps `g1` and sets `g2 = g1 + epsilon`.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self, ParamError> {
        Self::new(self.eta1, self.eta2, self.eta3, self.g1, self.g1 + epsilon)
    }

    /// The same transmissions with `g2` forced to `g1`.
    pub fn to_matched(&self) -> Self {
        Self {
            g2: self.g1,
            ..*self
        }
    }

    /// Named values, in the key convention accepted by [`validate_params`].
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        [
            ("eta1", self.eta1),
            ("eta2", self.eta2),
            ("eta3", self.eta3),
            ("g1", self.g1),
            ("g2", self.g2),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

/// Builds validated parameters from a name -> value map.
///
/// Accepted keys are `eta1`, `eta2`, `eta3`, `g1`, `g2`, with `g` as an alias
/// for `g1`. A missing `g2` defaults to `g1`.
pub fn validate_params(raw: &BTreeMap<String, f64>) -> Result<ExperimentParams, ParamError> {
    for key in raw.keys() {
        if !matches!(key.as_str(), "eta1" | "eta2" | "eta3" | "g" | "g1" | "g2") {
            return Err(ParamError::UnknownField(key.clone()));
        }
    }
    let get = |name: &str| {
        raw.get(name)
            .copied()
            .ok_or_else(|| ParamError::MissingField(name.to_string()))
    };
    let g1 = match (raw.get("g1"), raw.get("g")) {
        (Some(&a), Some(&b)) if a != b => {
            return Err(ParamError::OutOfRange {
                name: "g".to_string(),
                value: b,
                allowed: "a value equal to g1 when both are given",
            })
        }
        (Some(&a), _) => a,
        (None, Some(&b)) => b,
        (None, None) => return Err(ParamError::MissingField("g1".to_string())),
    };
    let g2 = raw.get("g2").copied().unwrap_or(g1);
    ExperimentParams::new(get("eta1")?, get("eta2")?, get("eta3")?, g1, g2)
}

/// Correlators, final photon number and witness value.
///
/// `witness` is always `|corr_xx + corr_yy + corr_zz| - n_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub corr_xx: f64,
    pub corr_yy: f64,
    pub corr_zz: f64,
    pub n_a: f64,
    pub witness: f64,
}

impl WitnessReport {
    pub fn new(corr_xx: f64, corr_yy: f64, corr_zz: f64, n_a: f64) -> Self {
        Self {
            corr_xx,
            corr_yy,
            corr_zz,
            n_a,
            witness: (corr_xx + corr_yy + corr_zz).abs() - n_a,
        }
    }

    pub fn correlator_sum(&self) -> f64 {
        self.corr_xx + self.corr_yy + self.corr_zz
    }

    /// Positive witness certifies entanglement; non-positive is inconclusive.
    pub fn certifies_entanglement(&self) -> bool {
        self.witness > 0.0
    }
}

/// Mean photon number in mode A right after the first cloner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CloneStats {
    pub n_clones: f64,
}
