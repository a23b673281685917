use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex `{vertex}`")]
    SelfLoop { line: usize, vertex: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph needs at least {required} vertices, found {found}")]
    TooFewVertices { required: usize, found: usize },

    /// The nucleolus and second-best analysis assume opt < 1, i.e. no bridge.
    #[error("assumption opt < 1 violated: {0}")]
    AssumptionViolated(String),

    #[error("{what}: size {size} exceeds oracle cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("element {0} is the degenerate set")]
    DegenerateTarget(usize),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("point does not satisfy the polytope description: {0}")]
    Infeasible(String),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("integer overflow while scaling rational weights")]
    Overflow,
}
