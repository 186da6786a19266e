//! Error type shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in this crate.
///
/// Operations distinguish *errors* (the question itself is malformed, or the
/// computation would exceed its resource budget) from *negative answers*
/// (the question is fine and the answer is "no"); the latter are ordinary
/// return values, never `Error`s.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A hypergraph containing the empty set alongside other edges has no
    /// transversals at all; the dualization operators reject it.
    #[error("the empty set is a hyperedge (alongside others), so no transversal exists")]
    EmptyHyperedge,

    /// An operation requiring an antichain (no hyperedge contained in
    /// another) was handed a family where `inner ⊆ outer`.
    #[error("family is not an antichain: {inner} is contained in {outer}")]
    NotSperner { inner: String, outer: String },

    /// Predicted state count (or visited states) exceeds the budget.
    #[error("computation needs about 2^{needed_log2} states, budget allows 2^{limit_log2}")]
    BudgetExceeded { needed_log2: u32, limit_log2: u32 },

    /// Numeric parameters out of range (e.g. `r >= n`).
    #[error("bad parameters: {0}")]
    BadParams(String),

    /// Structurally well-formed input that violates a semantic precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two objects that must share a ground set do not.
    #[error("ground sets differ: {left} vs {right} elements")]
    GroundSetMismatch { left: usize, right: usize },

    /// A family proposed as matroid circuits fails a circuit axiom.
    #[error("not a valid circuit family: {0}")]
    CircuitAxiom(String),

    /// A method restricted to simple binary matroids was invoked on
    /// something else (or without binary provenance).
    #[error("not a simple binary matroid: {0}")]
    NotSimpleBinary(String),

    /// A claimed covering design fails verification.
    #[error("not a covering system: {0}")]
    NotCoveringSystem(String),

    /// A generator set must be a subfamily of the family it generates.
    #[error("subset violation: {0}")]
    SubsetViolation(String),

    /// Design-theoretic operations require all blocks to share one size.
    #[error("family is not uniform: {0}")]
    NonUniformFamily(String),

    /// A construction is only defined for certain residue classes.
    #[error("bad residue: {0}")]
    BadResidue(String),

    /// Text-format parse failure; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Builds a parse error for a 1-based line number.
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
