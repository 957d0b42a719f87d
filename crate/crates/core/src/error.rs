use thiserror::Error;

/// Errors raised while building models, running rollouts, or persisting results.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown stiffness level `{0}` (expected high, medium or low)")]
    UnknownStiffness(String),
    #[error("unknown hydrodynamic model `{0}` (expected HM1..HM4)")]
    UnknownHydroModel(String),
    #[error("joint index {index} out of range 1..={max}")]
    JointOutOfRange { index: usize, max: usize },
    #[error("policy vector has length {got}, expected {expected}")]
    PolicyLength { got: usize, expected: usize },
    #[error("mass matrix is not positive definite at t = {t}")]
    SingularSystem { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("joint {joint} folded over (|phi| >= pi) at t = {t}")]
    FoldOver { joint: usize, t: f64 },
    #[error("invalid trajectory file: {0}")]
    TrajectoryFormat(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
