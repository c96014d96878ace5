use std::fmt;

use thiserror::Error;

use crate::profile::{AgentId, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A problem found while reading a text file, tagged with its 1-based line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("{0} and {1} are on the same side")]
    SameSide(AgentId, AgentId),

    #[error("unknown agent: {0}")]
    UnknownAgent(String),

    #[error("swap {0} does not exchange two adjacent agents")]
    NonAdjacentSwap(String),

    #[error("invalid profile: {}", join(.0))]
    InvalidProfile(Vec<Violation>),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("{0} is unmatched, so it has no successor")]
    NoSuccessorDefined(AgentId),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("rotation set is not closed under predecessors")]
    NotClosed,

    #[error("matching is not locally {0}-nearly stable")]
    NotNearlyStable(usize),

    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("{}", join(.0))]
    Parse(Vec<Diagnostic>),

    #[error("internal consistency violation: {0}")]
    Internal(String),
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
