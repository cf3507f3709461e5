use crate::space::ModelId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MagnitudeError {
    #[error("not greater: subtraction needs the subtrahend to be smaller")]
    NotGreater,
    #[error("model is discrete")]
    DiscreteModel,
    #[error("model mismatch: {left} vs {right}")]
    ModelMismatch { left: ModelId, right: ModelId },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("oracle failure: {0}")]
    OracleFailure(String),
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("inexact model: {0}")]
    InexactModel(ModelId),
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error("unsupported codomain: {0}")]
    UnsupportedCodomain(String),
    #[error("undecided at precision {0}")]
    Undecided(u32),
    #[error("model not symmetric")]
    NotSymmetric,
    #[error("not above one at precision {0}")]
    NotAboveOne(u32),
    #[error("model {0} has no unit")]
    NoUnit(ModelId),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("unknown law or law set: {0}")]
    UnknownLaw(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
