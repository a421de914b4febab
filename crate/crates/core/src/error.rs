use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The truncated dimension sequence did not settle before the degree cap.
    #[error("quotient dimension did not stabilize up to degree {d_max} (last values {last:?})")]
    NotStabilized { d_max: u32, last: Vec<usize> },

    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("component {component} of branch {branch} has a nonzero constant term")]
    NonzeroConstant { branch: usize, component: usize },

    #[error("polynomial {what} must vanish at the origin")]
    NotVanishing { what: String },

    #[error("branch {branch} has corank {corank}, only corank <= 1 is supported")]
    NotCorankOne { branch: usize, corank: usize },

    #[error("type {label} is not a stable type in dimensions ({n},{p})")]
    NotStableType { label: String, n: usize, p: usize },

    #[error("unsupported dimensions ({n},{p}): {reason}")]
    UnsupportedDimensions { n: usize, p: usize, reason: String },

    #[error("invalid germ: {0}")]
    InvalidGerm(String),

    #[error("unfolding is not stable (Ae-codimension {codim})")]
    UnstableUnfolding { codim: usize },

    #[error("invalid unfolding: {0}")]
    InvalidUnfolding(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("Nishimura bound undefined for n*p = 1 or zero denominator (n={n}, p={p})")]
    BoundUndefined { n: usize, p: usize },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown atlas entry {0:?}")]
    UnknownEntry(String),

    #[error("parameter out of range for {entry}: {message}")]
    ParamOutOfRange { entry: String, message: String },

    /// A self-consistency check inside the engine failed.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
