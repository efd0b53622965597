use thiserror::Error;

/// Parameter validation failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{name}` = {value} is outside {allowed}")]
    OutOfRange {
        name: String,
        value: f64,
        allowed: &'static str,
    },
    #[error("required parameter `{0}` is missing")]
    MissingField(String),
    #[error("unknown parameter `{0}`")]
    UnknownField(String),
}

/// Failures of the closed-form engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticError {
    #[error("invalid parameters: {0}")]
    Param(#[from] ParamError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("divergent: {0}")]
    Divergent(String),
    #[error("hyperbolic overflow at gain {gain}")]
    Overflow { gain: f64 },
    #[error("operation requires matched gains, got g1 = {g1}, g2 = {g2}")]
    GainMismatch { g1: f64, g2: f64 },
}

/// Failures of the Fock-space oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error(
        "truncation exceeded at stage `{stage}`: top-level population {population:.3e} > \
         tail tolerance {tail_tol:.1e} with n_max = {n_max} (ceiling {ceiling})"
    )]
    TruncationExceeded {
        stage: String,
        population: f64,
        tail_tol: f64,
        n_max: usize,
        ceiling: usize,
    },
    #[error("invalid truncation policy: {0}")]
    InvalidPolicy(String),
    #[error("invalid parameters: {0}")]
    Param(#[from] ParamError),
    #[error("state of dimension {0} is too large to materialize densely")]
    TooLarge(usize),
}

impl FockError {
    /// Attach the pipeline stage name to a truncation failure.
    pub fn at_stage(self, stage: &str) -> Self {
        match self {
            FockError::TruncationExceeded {
                population,
                tail_tol,
                n_max,
                ceiling,
                ..
            } => FockError::TruncationExceeded {
                stage: stage.to_string(),
                population,
                tail_tol,
                n_max,
                ceiling,
            },
            other => other,
        }
    }
}

/// Failures of the orchestration layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("invalid scan: {0}")]
    Scan(String),
}
