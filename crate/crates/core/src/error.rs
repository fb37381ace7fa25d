use thiserror::Error;

/// Errors raised by the solvers and residual checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid has {n_points} points, at least {required} are needed")]
    GridTooSmall { n_points: usize, required: usize },

    #[error("sampled functions live on different grids")]
    GridMismatch,

    #[error("step size {step:e} underflowed at x = {x}")]
    StepSizeUnderflow { x: f64, step: f64 },

    #[error("non-finite state encountered at x = {x}")]
    NonFiniteState { x: f64 },

    #[error("amplitude collapsed at x = {x}")]
    AmplitudeCollapse { x: f64 },

    #[error("solution pair is degenerate: Wronskian {wronskian:e} below {threshold:e}")]
    DegeneratePair { wronskian: f64, threshold: f64 },

    #[error("wave function has a node (|psi| = {modulus:e}) at x = {x}")]
    NodeEncountered { x: f64, modulus: f64 },

    #[error("phase is under-resolved between x = {x} and the next sample")]
    UnresolvedPhase { x: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
