use alloc::string::String;

use thiserror::Error;

use crate::rsm::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemiringError {
    #[error("unknown semiring `{0}` (expected boolean, tropical or genkill:<facts>)")]
    UnknownSemiring(String),
    #[error("gen/kill universe has {0} facts, at most 64 are supported")]
    UniverseTooLarge(usize),
    #[error("{0}")]
    BadName(String),
    #[error("semiring mismatch: {0}")]
    Mismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("ill-formed RSM:\n{0}")]
    InvalidRsm(ValidationReport),
    #[error("ill-formed configuration: {0}")]
    IllFormedConfiguration(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no termination after {count} relaxations of one transition ({what}); the semiring probably violates the descending chain condition")]
    NonTermination { what: String, count: u64 },
    #[error("block table needs {needed} module sequences, budget is {budget}")]
    BudgetExceeded { needed: usize, budget: usize },
    #[error("oracle did not stabilize below stack bound {ceiling}")]
    Inconclusive { ceiling: usize },
    #[error("context bound k must be at least 1")]
    ZeroContextBound,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
