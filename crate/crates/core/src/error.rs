use thiserror::Error;

/// Errors raised by cubepack operations.
///
/// Semantic outcomes such as an overlapping pair or a refuted parity check are
/// results, not errors; this enum covers unmet preconditions and bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("empty box: lower bound {lower} is not below upper bound {upper} in coordinate {axis}")]
    EmptyBox {
        axis: usize,
        lower: String,
        upper: String,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("operation requires a torus-periodic instance")]
    NotPeriodic,

    #[error("instance is a packing but not a tiling (deficit {deficit})")]
    NotTiling { deficit: String },

    #[error("instance is not a packing: cubes at {first} and {second} overlap")]
    NotPacking { first: String, second: String },

    #[error("point {0} is not a member of the instance")]
    NotMember(String),

    #[error("unit cube at {0} is not covered by the packing")]
    NotCovered(String),

    #[error("point {0} is already an origin of the packing")]
    AlreadyMember(String),

    #[error("period {period} in coordinate {axis} is odd; re-encode with doubled periods")]
    OddPeriod { axis: usize, period: i64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("backtracking search exhausted without finding a tiling")]
    SearchExhausted,

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
