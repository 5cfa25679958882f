//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, construction, and the verification engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Text did not conform to the grammar; `pos` is a byte offset.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// An atom token that the active calculus does not know.
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    /// Two members of a `|` group are not provably contradictory.
    #[error("disjointness violation: `{left}` and `{right}` are not provably contradictory")]
    DisjointnessViolation { left: String, right: String },

    /// Malformed basis (duplicate/reserved atom names, empty axiom, ...).
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    /// Malformed poset input.
    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    /// The poset is not an algebraic L-domain; the message names the failing clause.
    #[error("not an L-domain: {0}")]
    NotAnLDomain(String),

    /// A conjunction-class operation received a contradictory class.
    #[error("not a conjunction: {0}")]
    NotAConjunction(String),

    /// No irreducible flat witness exists within the finite conjunction universe.
    #[error("not expressible here: {0}")]
    NotExpressibleHere(String),

    /// An enumeration exceeded its configured budget.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// Derivation search exhausted its node budget.
    #[error("search budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: usize },

    /// The sampled formula universe is too small to certify a check.
    #[error("universe too small: {0}")]
    UniverseTooSmall(String),

    /// A family of states that was required to be directed is not.
    #[error("not directed: {0}")]
    NotDirected(String),

    /// A map that was required to be monotone is not.
    #[error("not monotone: {0}")]
    NotMonotone(String),

    /// Composition of consequence relations over mismatched calculi.
    #[error("composition mismatch: {0}")]
    CompositionMismatch(String),

    /// A stated operation precondition does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;
