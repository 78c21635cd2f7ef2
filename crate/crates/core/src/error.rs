//! Error type shared across the whole engine.

use thiserror::Error;

/// Errors raised by constructors, checkers and the quotient engine.
///
/// Law violations discovered by a checker are usually reported through a
/// [`crate::report::Report`] instead; `Error` is reserved for conditions that
/// make the requested computation impossible or meaningless.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A table references an identifier that was never declared, or a table
    /// required to be total has a hole.
    #[error("malformed tables: {0}")]
    MalformedTables(String),

    /// Sources/targets of composed cells do not line up.
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    /// A word in a presentation is not composable or a relation's sides have
    /// different boundaries.
    #[error("boundary error: {0}")]
    BoundaryError(String),

    /// Completion or normal-form enumeration exceeded its step budget.
    /// This is an "unknown/possibly infinite" outcome, never a wrong answer.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),

    /// DSL parse error with position information.
    #[error("syntax error at {line}:{column}: {msg}")]
    SyntaxError { line: usize, column: usize, msg: String },

    /// An input that was required to pass a checker failed it.  For the
    /// composition combinators this is an internal-consistency alarm: the
    /// underlying lemmas prove the output must pass.
    #[error("check failed: {0}")]
    CheckFailed(String),

    /// The pairing compatibility condition failed at a named pair of 1-cells.
    #[error("compatibility failure: {0}")]
    CompatibilityFailure(String),

    /// Two families that must share components disagree.
    #[error("component mismatch: {0}")]
    ComponentMismatch(String),

    /// A generator mapping does not respect a quotient relation.
    #[error("relation violation: {0}")]
    RelationViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
