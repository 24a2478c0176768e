use thiserror::Error;

use crate::ballcore::AxiomReport;
use crate::decompose::{BranchingProfile, HomogeneityReport};

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The caller broke an operation's precondition on otherwise well-formed data.
    Contract,
    /// Malformed or inconsistent input data.
    Input,
    /// A configured size bound was exceeded.
    Resource,
}

#[derive(Debug, Error)]
pub enum BalleanError {
    #[error("support must contain at least one point")]
    EmptySupport,
    #[error("radius list must contain at least one radius")]
    NoRadii,
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },
    #[error("duplicate {what} name {name:?}")]
    DuplicateName { what: &'static str, name: String },
    #[error("unknown {what} name {name:?}")]
    UnknownName { what: &'static str, name: String },
    #[error("missing ball for point {point:?} at radius {radius:?}")]
    MissingBall { point: String, radius: String },
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed document: {0}")]
    Format(String),
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("bound list has length {got}, expected {expected}")]
    BoundLength { got: usize, expected: usize },
    #[error("structure is not a ballean ({})", .0.summary())]
    NotABallean(Box<AxiomReport>),
    #[error("not cellular at radius {radius}: {y} is path connected to {x} but outside its ball")]
    NotCellular { radius: usize, x: usize, y: usize },
    #[error("not connected: no ball around {x} contains {y}")]
    Disconnected { x: usize, y: usize },
    #[error("radii {a} and {b} are incomparable")]
    RadiiNotLinear { a: usize, b: usize },
    #[error("top-radius ball around {x} is not the whole support")]
    TopNotWhole { x: usize },
    #[error("point {x} is not covered by the blocks")]
    NotCovered { x: usize },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("structure is not homogeneous: {}", .0.describe())]
    NotHomogeneous(Box<HomogeneityReport>),
    #[error("branching profiles differ: {left} vs {right}")]
    ProfileMismatch {
        left: BranchingProfile,
        right: BranchingProfile,
    },
    #[error("invalid pointed family: {0}")]
    InvalidFamily(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup chain: {0}")]
    InvalidChain(String),
    #[error("support of size {size} exceeds the bound {limit}")]
    TooLarge { size: usize, limit: usize },
}

impl BalleanError {
    pub fn kind(&self) -> ErrorKind {
        use BalleanError::*;
        match self {
            TooLarge { .. } => ErrorKind::Resource,
            NotCellular { .. }
            | Disconnected { .. }
            | RadiiNotLinear { .. }
            | TopNotWhole { .. }
            | NotCovered { .. }
            | NotHomogeneous(_)
            | ProfileMismatch { .. } => ErrorKind::Contract,
            _ => ErrorKind::Input,
        }
    }
}

pub type Result<T, E = BalleanError> = std::result::Result<T, E>;
