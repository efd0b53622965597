//! Simulation of a photon that is cloned by stimulated parametric
//! down-conversion and then un-cloned, with losses before, between and after
//! the two cloners.
//!
//! Two independent engines compute the entanglement witness of the final
//! state: [`analytic`] evaluates closed-form Heisenberg-picture expressions,
//! and [`fock`] evolves a truncated Fock-space density operator from first
//! principles. [`experiment`] compares them and runs the sweeps exposed by
//! the `clone-invert` binary.

pub mod analytic;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod params;
pub mod table;

pub use error::{AnalyticError, ExperimentError, FockError, ParamError};
pub use params::{validate_params, CloneStats, ExperimentParams, WitnessReport};
pub use table::SweepTable;
