//! Validation and science runs built on the two engines.

mod compare;
pub mod fit;
mod scans;

pub use compare::{
    compare_many, default_policy, oracle_compare, validation_grid, DiscrepancyReport,
};
pub use scans::{
    figure2_sweep, grid_sweep, mismatch_scan, sensitivity_scan, MismatchFit, MismatchScan,
    SensitivityScan, MISMATCH_LINEAR_TOL,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::ExperimentError;
use crate::params::ExperimentParams;

/// Environment variable capping scan parallelism.
pub const THREADS_ENV: &str = "CLONE_INVERT_THREADS";

/// Inclusive, evenly spaced range `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisRange {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, ExperimentError> {
        if count < 1 {
            return Err(ExperimentError::Scan(
                "range count must be at least 1".into(),
            ));
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err(ExperimentError::Scan("range bounds must be finite".into()));
        }
        Ok(Self { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }

    pub fn min(&self) -> f64 {
        self.start.min(self.stop)
    }

    pub fn max(&self) -> f64 {
        self.start.max(self.stop)
    }
}

impl fmt::Display for AxisRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl FromStr for AxisRange {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || ExperimentError::Scan(format!("expected start:stop:count, got `{s}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let stop = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(start, stop, count)
    }
}

/// A parameter that can be swept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    Eta1,
    Eta2,
    Eta3,
    G1,
    Epsilon,
}

impl ScanAxis {
    pub const ALL: [ScanAxis; 5] = [
        ScanAxis::Eta1,
        ScanAxis::Eta2,
        ScanAxis::Eta3,
        ScanAxis::G1,
        ScanAxis::Epsilon,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScanAxis::Eta1 => "eta1",
            ScanAxis::Eta2 => "eta2",
            ScanAxis::Eta3 => "eta3",
            ScanAxis::G1 => "g1",
            ScanAxis::Epsilon => "epsilon",
        }
    }

    /// Replaces this coordinate of `params`. Sweeping `g1` keeps the
    /// current mismatch `epsilon`.
    pub fn set(
        self,
        params: &ExperimentParams,
        value: f64,
    ) -> Result<ExperimentParams, ExperimentError> {
        let p = match self {
            ScanAxis::Eta1 => params.with_eta1(value)?,
            ScanAxis::Eta2 => params.with_eta2(value)?,
            ScanAxis::Eta3 => params.with_eta3(value)?,
            ScanAxis::G1 => ExperimentParams::new(
                params.eta1(),
                params.eta2(),
                params.eta3(),
                value,
                value + params.epsilon(),
            )?,
            ScanAxis::Epsilon => params.with_epsilon(value)?,
        };
        Ok(p)
    }
}

impl FromStr for ScanAxis {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScanAxis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| ExperimentError::Scan(format!("unknown scan axis `{s}`")))
    }
}

/// Derived quantity tabulated by [`grid_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Witness,
    MeanPhoton,
    CloneNumber,
    Sensitivity,
    Threshold,
    MismatchWitness,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Witness,
        Target::MeanPhoton,
        Target::CloneNumber,
        Target::Sensitivity,
        Target::Threshold,
        Target::MismatchWitness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Witness => "witness",
            Target::MeanPhoton => "n_a",
            Target::CloneNumber => "n_clones",
            Target::Sensitivity => "dw_deta2",
            Target::Threshold => "eta2_threshold",
            Target::MismatchWitness => "witness_mismatch_claimed",
        }
    }
}

impl FromStr for Target {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| ExperimentError::Scan(format!("unknown target `{s}`")))
    }
}

/// What to sweep and what to tabulate.
///
/// `base` holds the fixed values of every parameter that is not swept.
/// `delta_w_min` is the smallest detectable witness change, needed only by
/// [`sensitivity_scan`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub base: ExperimentParams,
    pub ranges: BTreeMap<ScanAxis, AxisRange>,
    pub targets: Vec<Target>,
    pub witness_levels: Vec<f64>,
    pub delta_w_min: Option<f64>,
}

impl ScanSpec {
    pub fn new(base: ExperimentParams) -> Self {
        Self {
            base,
            ranges: BTreeMap::new(),
            targets: vec![Target::Witness],
            witness_levels: vec![0.0, 0.5, 1.0],
            delta_w_min: None,
        }
    }

    pub fn with_range(mut self, axis: ScanAxis, range: AxisRange) -> Self {
        self.ranges.insert(axis, range);
        self
    }

    pub fn range(&self, axis: ScanAxis) -> Result<AxisRange, ExperimentError> {
        self.ranges.get(&axis).copied().ok_or_else(|| {
            ExperimentError::Scan(format!("scan needs a range for `{}`", axis.name()))
        })
    }

    /// Checks every range against its parameter domain.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        for (&axis, range) in &self.ranges {
            for v in [range.min(), range.max()] {
                axis.set(&self.base, v)?;
            }
        }
        if let Some(dw) = self.delta_w_min {
            if !(dw > 0.0) {
                return Err(ExperimentError::Scan("delta_w_min must be positive".into()));
            }
        }
        Ok(())
    }

    fn metadata(&self, generator: &str) -> crate::table::TableMetadata {
        let mut meta = crate::table::TableMetadata::new(generator);
        for (axis, range) in &self.ranges {
            meta.ranges
                .insert(axis.name().to_string(), range.to_string());
        }
        for (k, v) in self.base.to_map() {
            let swept = self.ranges.keys().any(|a| a.name() == k);
            if !swept {
                meta.fixed.insert(k, v);
            }
        }
        if let Some(dw) = self.delta_w_min {
            meta.fixed.insert("delta_w_min".into(), dw);
        }
        meta
    }
}

/// Thread pool honouring [`THREADS_ENV`].
pub(crate) fn thread_pool() -> rayon::ThreadPool {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
}
