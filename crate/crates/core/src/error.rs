use thiserror::Error;

/// Errors raised across the solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("delay a = {0} outside the supported range [pi/2, pi)")]
    DelayOutOfRange(f64),

    #[error("grid needs at least 16 subintervals, got {0}")]
    GridTooCoarse(usize),

    #[error("grid function has {got} nodes, expected {expected}")]
    GridMismatch { expected: usize, got: usize },

    #[error("non-finite potential value at node {0}")]
    NonFinite(usize),

    #[error("kernel argument outside a <= t <= x <= pi: x = {x}, t = {t}")]
    KernelDomain { x: f64, t: f64 },

    #[error("root search failed near index {0}")]
    NonConvergence(usize),

    #[error("method-of-steps integrator did not meet tolerance (last difference {0:e})")]
    StepSizeFailure(f64),

    #[error("spectrum too short: need at least {needed} eigenvalues, got {got}")]
    SpectrumTooShort { needed: usize, got: usize },

    #[error("boundary index mismatch: expected j = {expected}, got j = {got}")]
    WrongBoundaryIndex { expected: u8, got: u8 },

    #[error("only {0} indices pass the |cos(n a)| threshold")]
    InsufficientIndices(usize),

    #[error("asymptotic fit is ill-conditioned: all |cos| below threshold in the window")]
    IllConditionedFit,

    #[error("spectra have different truncation lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("delay mismatch: {0} vs {1}")]
    DelayMismatch(f64, f64),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
