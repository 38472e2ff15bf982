use thiserror::Error;

/// Crate-wide error type.
///
/// Variants split into two families: input/validation errors (rejected
/// domain objects, bad configuration) and solver failures (numerical
/// breakdown inside the constrained best-response solve). The CLI maps
/// the former to exit code 1 and the latter to exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("instance needs at least two arms, got {0}")]
    TooFewArms(usize),

    #[error("mean at position {} is not finite", .0 + 1)]
    NonFiniteMean(usize),

    #[error("ambiguous best arm: arms {} and {} are within {tol} of the maximum", .a + 1, .b + 1)]
    AmbiguousBestArm { a: usize, b: usize, tol: f64 },

    #[error("self-loop on node {}", .0 + 1)]
    SelfLoop(usize),

    #[error("edge ({}, {}) has invalid weight {weight}", .a + 1, .b + 1)]
    BadEdgeWeight { a: usize, b: usize, weight: f64 },

    #[error("node index {} out of range for {k} nodes", .node + 1)]
    NodeOutOfRange { node: usize, k: usize },

    #[error("duplicate edge between nodes {} and {}", .a + 1, .b + 1)]
    DuplicateEdge { a: usize, b: usize },

    #[error("matrix is not a valid Laplacian: {0}")]
    NotALaplacian(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("weights are not a point of the simplex: {0}")]
    InvalidWeights(String),

    #[error("smoothness budget must be nonnegative, got {0}")]
    NegativeBudget(f64),

    #[error("forced-exploration floor {eps} exceeds 1/{k}")]
    EpsilonTooLarge { eps: f64, k: usize },

    #[error("arm {} has no samples yet", .0 + 1)]
    ZeroPulls(usize),

    #[error("{name} must lie strictly inside (0, 1), got {value}")]
    OutsideUnitInterval { name: &'static str, value: f64 },

    #[error("alternative arm must differ from the best arm {}", .0 + 1)]
    AlternativeIsBest(usize),

    #[error("reduced system is numerically singular (gamma = {gamma})")]
    SingularSystem { gamma: f64 },

    #[error(
        "no multiplier bracket found: gamma reached {gamma_hi}, smoothness {smoothness} vs budget {budget} ({detail})"
    )]
    BracketFailure {
        gamma_hi: f64,
        smoothness: f64,
        budget: f64,
        detail: &'static str,
    },

    #[error("iteration budget must be at least 1")]
    ZeroIterations,

    #[error("invalid problem spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code the CLI uses for this error: 1 for input errors, 2 for
    /// solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularSystem { .. } | Error::BracketFailure { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
