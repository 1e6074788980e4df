use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid split: {0}")]
    InvalidSplit(String),
    #[error("leaf count mismatch: {0} vs {1}")]
    LeafCountMismatch(u32, u32),
    #[error("unknown axis: {0}")]
    UnknownAxis(String),
    #[error("support is not a face of the scaffold complex: {0}")]
    NotAFace(String),
    #[error("negative length on axis {0} in an unsigned space")]
    NegativeLength(String),
    #[error("points live in different spaces")]
    PointsInDifferentSpaces,
    #[error("incompatibility graph side is empty")]
    EmptySide,
    #[error("zero weight on vertex {0}")]
    ZeroWeight(String),
    #[error("flow is not a maximum flow of value 1")]
    FlowNotMaximum,
    #[error("enumeration exceeded the cap of {0}")]
    CountExceeded(usize),
    #[error("parameter {name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("point is not interior to a maximal orthant: {0}")]
    NotInteriorToMaximalOrthant(String),
    #[error("invalid squared coordinate on axis {0}")]
    InvalidSquaredCoordinate(String),
    #[error("support does not match the point/orthant structure: {0}")]
    SupportMismatch(String),
    #[error("cell has empty relative interior")]
    EmptyInterior,
    #[error("instance too large: {0}")]
    LimitExceeded(String),
    #[error("iteration limit {0} reached before convergence")]
    TimedOut(u64),
    #[error("descent exceeded {0} outer iterations")]
    MaxOuterIterationsExceeded(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
