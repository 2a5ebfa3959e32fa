use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid weight {weight} on ({i}, {j})")]
    InvalidWeight { i: usize, j: usize, weight: f64 },

    #[error("vertex {0} is isolated (zero weighted degree)")]
    IsolatedVertex(usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("relaxation parameter omega = {0} is outside (0, 2)")]
    InvalidOmega(f64),

    #[error("at least one relaxation run is required")]
    NoRuns,

    #[error("norm exponent p = {0} is below 1")]
    InvalidNorm(f64),

    #[error("vector length {got} does not match {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("hyperedge {0} is empty")]
    EmptyHyperedge(usize),

    #[error("hyperedge {hyperedge} lists vertex {vertex} twice")]
    RepeatedPin { hyperedge: usize, vertex: usize },

    #[error("{what} of size {size} exceeds the dense limit {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("normalizing eigenvalue {0} is too close to zero")]
    DegenerateNormalization(f64),

    #[error("distance field does not match the graph edge set")]
    DistanceFieldMismatch,

    #[error("vertex {0} has no part assigned")]
    Unassigned(usize),

    #[error("part {part} is outside 0..{tau}")]
    InvalidPart { part: usize, tau: usize },

    #[error("part {0} is empty")]
    EmptyPart(usize),

    #[error("no split of {n} vertices satisfies imbalance {imbalance}")]
    BalanceInfeasible { n: usize, imbalance: f64 },

    #[error("weight {0} is not a non-negative integer")]
    NonIntegralWeight(f64),

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("partitioner executable not found: {0} (use the internal fallback bisector instead)")]
    PartitionerMissing(PathBuf),

    #[error("partitioner failed ({status}): {stderr}")]
    PartitionerFailed {
        status: String,
        stdout: String,
        stderr: String,
        workdir: Option<PathBuf>,
    },

    #[error("partitioner timed out after {secs} s")]
    PartitionerTimeout {
        secs: u64,
        stdout: String,
        stderr: String,
        workdir: Option<PathBuf>,
    },

    #[error("partitioner output unusable: {msg}")]
    PartitionerOutput {
        msg: String,
        stdout: String,
        workdir: Option<PathBuf>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_owned(),
            line,
            msg: msg.into(),
        }
    }
}
