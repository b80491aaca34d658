//! Library error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("point is not a member of the set: {0}")]
    NotMember(String),
    #[error("infeasible point: {0}")]
    Infeasible(String),
    #[error("direction is not tangent: {0}")]
    NotTangent(String),
    #[error("directional nondegeneracy fails: {0}")]
    Degenerate(String),
    #[error("basic assumption violated: {0}")]
    AssumptionFailed(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("multiple solutions: {0}")]
    MultipleSolutions(String),
    #[error("inconsistent representations: {0}")]
    InconsistentRep(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A property the theory guarantees failed at runtime. Maps to exit
    /// code 3 in the CLI; must never fire on valid inputs.
    #[error("contract violation: {0}")]
    ContractViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
