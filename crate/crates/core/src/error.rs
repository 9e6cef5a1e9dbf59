use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar mode mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: &'static str, found: String },

    #[error("series has nonzero constant term; composition requires ord(g) >= 1")]
    NonzeroConstantTerm,

    #[error("series is not compositionally invertible: {0}")]
    NotInvertible(&'static str),

    #[error("{op}: precondition violated: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("{op}: exact window underflow (requested {requested}, achievable {achievable})")]
    WindowUnderflow { op: &'static str, requested: i64, achievable: i64 },

    #[error("{op}: output degree {degree} exceeds max_out_degree {max_out}")]
    DegreeOverflow { op: &'static str, degree: usize, max_out: usize },

    #[error("{op}: truncated operand cannot be composed: {reason}")]
    Truncation { op: &'static str, reason: &'static str },

    #[error("gen_pow: series does not terminate on column {column} and no term bound was given")]
    NonTerminating { column: usize },

    #[error("{op}: operator is not unipotent on column {column}")]
    NotUnipotent { op: &'static str, column: usize },

    #[error("multiplier f'(0) = {0} is not 1; exact mode requires a tangent-to-identity generator")]
    MultiplierNotOne(String),

    #[error("{op}: construction is inconsistent: {reason}")]
    Inconsistent { op: &'static str, reason: String },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn pre(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition { op, reason: reason.into() }
    }
}
