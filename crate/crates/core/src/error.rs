use thiserror::Error;

/// Errors raised by the combinatorial routines in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// The matrix is not the boundary map of a connected quiver: some Smith
    /// invariant differs from 1, or the rank is short.
    #[error("not a boundary map: {0}")]
    NotABoundaryMap(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A structural identity that should hold by construction failed.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    /// The string-rank recursion produced a negative rank.
    #[error(
        "model inconsistency at n={n}, d={d}, partition {{{partition}}}: \
         (r-1)! = {local_rank} but subtracted contributions sum to {subtracted} ({detail})"
    )]
    ModelInconsistency {
        n: u32,
        d: i64,
        partition: String,
        local_rank: String,
        subtracted: String,
        detail: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
