use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("cone has no generators")]
    EmptyCone,

    #[error("zero vector cannot generate a ray")]
    ZeroRay,

    #[error("cone contains a line; extreme rays are undefined")]
    NotPointed,

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("polytope is empty")]
    EmptyPolytope,

    #[error("negative weight {0} in Minkowski combination")]
    NegativeWeight(String),

    #[error("generator {index} has zero multidegree")]
    ZeroDegreeGenerator { index: usize },

    #[error("degree bound {bound} is smaller than required degree {needed}")]
    BoundTooSmall { bound: u32, needed: u32 },

    #[error("total degree {degree} exceeds materialized bound {bound}")]
    BeyondBound { degree: u64, bound: u32 },

    #[error("direction {0} is not integral after scaling")]
    NonIntegralDirection(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("no semigroup elements along the ray")]
    EmptyRay,

    #[error("fiber over {0} is empty")]
    EmptyFiber(String),

    #[error("resolution {needed} exceeds cap {cap}")]
    ResolutionExceeded { needed: u32, cap: u32 },

    #[error("no p in the sampled set satisfies the vertex bound")]
    NotReached,

    #[error("volume is zero at direction {0}")]
    ZeroVolume(String),

    #[error("direction {0} is not in the cell")]
    BarycentricFailure(String),

    #[error("polytope is not full-dimensional")]
    NotFullDimensional,

    #[error("negative entry in {0}")]
    NegativeEntry(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
