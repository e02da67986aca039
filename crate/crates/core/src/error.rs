use thiserror::Error;

/// Errors raised while building operators, constructing bases or running experiments.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Taylor tables expanded at different centers: {0:?} vs {1:?}")]
    CenterMismatch([f64; 3], [f64; 3]),

    #[error("insufficient table order: need at least {needed}, have {have}")]
    OrderTooLow { needed: usize, have: usize },

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("flow must be subsonic at the center (|M| = {0})")]
    Supersonic(f64),

    #[error("density must be positive at the center (rho = {0})")]
    NonPositiveDensity(f64),

    #[error("invalid polynomial seed {0:?}: need seed1 in {{0,1}} and |seed| <= {1}")]
    InvalidSeed([u8; 3], usize),

    #[error("zero pivot in subsystem solve")]
    ZeroPivot,

    #[error("basis functions do not share a common center")]
    MixedCenters,

    #[error("argument {0} outside the supported range")]
    OutOfRange(f64),

    #[error("too few valid points for a slope fit ({0} < 3)")]
    TooFewPoints(usize),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
