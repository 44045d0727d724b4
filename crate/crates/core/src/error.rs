use thiserror::Error;

/// Errors surfaced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input graph is disconnected")]
    Disconnected,
    #[error("bipartition is unbalanced ({left} vs {right})")]
    UnbalancedBipartition { left: usize, right: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("graph is not regular")]
    NotRegular,
    #[error("parity violation: n*d = {n}*{d} is odd")]
    ParityViolation { n: usize, d: usize },
    #[error("retry cap of {0} exceeded")]
    RetryCapExceeded(usize),
    #[error("fiber size {0} is odd but the base has loops")]
    OddFiberWithLoops(usize),
    #[error("noise completion failed after {0} attempts")]
    CompletionFailed(usize),
    #[error("respectful noise requires the lift the graph came from")]
    MissingBase,
    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),
    #[error("walk length {s} exceeds depth cap {cap}")]
    DepthCapExceeded { s: usize, cap: usize },
    #[error("instance too large for exact search: {0}")]
    SizeCapExceeded(String),
    #[error("result does not belong to the lift's base graph")]
    BaseMismatch,
    #[error("kernel moments miss tolerance {tol} at cap degree (worst error {worst})")]
    KernelMomentFailure { worst: f64, tol: f64 },
    #[error("Gram repair infeasible: {0}")]
    RepairInfeasible(String),
    #[error("no certificate with even degree up to {0}")]
    SCapExceeded(usize),
    #[error("bipartite mode needs a balanced layout of the input graph")]
    LayoutMissing,
    #[error("witness unavailable: {0}")]
    WitnessUnavailable(String),
    #[error("pseudomoment violates hard constraints (max residual {0:e})")]
    HardConstraintsViolated(f64),
    #[error("unknown table row: {0}")]
    UnknownRow(String),
    #[error("unknown built-in graph: {0}")]
    UnknownGraph(String),
    #[error("vertex {0} carries a loop and cannot be properly colored")]
    LoopedVertex(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
