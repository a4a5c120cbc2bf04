use thiserror::Error;

/// Errors raised by the library. Verdicts (a datum that violates a clause, a
/// triangulation that is not coherent) are reported as values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("singular matrix")]
    Singular,
    #[error("invalid special datum: {0}")]
    InvalidDatum(String),
    #[error("datum must be canonicalized first: {0}")]
    CanonicalizationRequired(String),
    #[error("invalid free parameter {name} = {value} (must be at least 2)")]
    InvalidParameter { name: String, value: u64 },
    #[error("datum has {0} trees; use the forest geometry")]
    MultiTree(usize),
    #[error("dimension {dim} exceeds the search budget {budget}")]
    BudgetExceeded { dim: usize, budget: usize },
    #[error("join hypothesis failed: {0}")]
    JoinHypothesis(String),
    #[error("dilation factor must be at least 1")]
    EmptyDilation,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no admissible epsilon after {0} halvings")]
    EpsilonSearch(u32),
    #[error("incomplete certificate: {0}")]
    IncompleteCertificate(String),
    #[error("lattice inconsistency: {0}")]
    LatticeInconsistency(String),
    #[error("convention error: {0}")]
    Convention(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
