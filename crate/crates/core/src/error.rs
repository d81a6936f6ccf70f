use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("undefined arithmetic: {0}")]
    Arithmetic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("undefined critical index (alpha must be positive)")]
    UndefinedCriticalIndex,
    #[error("regularity above N/2 unsupported")]
    RegularityAboveHalfDim,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("wrong dimension branch: {0}")]
    WrongBranch(String),
    #[error("mu outside (b,1)")]
    MuOutside,
    #[error("epsilon too large: {0}")]
    EpsilonTooLarge(String),
    #[error("theta outside window: theta = {theta}, window = (0, {window})")]
    ThetaOutsideWindow { theta: String, window: String },
    #[error("no positive theta window: {0}")]
    NoThetaWindow(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("wavenumber not on the frequency lattice")]
    OffLattice,
    #[error("ring requires dim >= 2")]
    RingDimension,
    #[error("box too small: boundary-shell mass fraction {0:e}")]
    BoxTooSmall(f64),
    #[error("non-finite value encountered at step {step}")]
    NonFinite { step: usize },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
