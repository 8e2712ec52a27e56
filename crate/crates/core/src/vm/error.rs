use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorKind {
    UndefinedOperand,
    TypeViolation,
    RangeViolation,
    DivisionByZero,
    DomainError,
    StepLimit,
    InteractionAbort,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::UndefinedOperand => "undefined-operand",
            ErrorKind::TypeViolation => "type-violation",
            ErrorKind::RangeViolation => "range-violation",
            ErrorKind::DivisionByZero => "division-by-zero",
            ErrorKind::DomainError => "domain-error",
            ErrorKind::StepLimit => "step-limit",
            ErrorKind::InteractionAbort => "interaction-abort",
        })
    }
}

/// Failure raised inside one operation, before the VM attaches the
/// operation name and code position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind}: {message}")]
pub struct OpError {
    pub kind: ErrorKind,
    pub message: String,
}

impl OpError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            kind,
            message: message.into(),
        }
    }

    pub fn range(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::RangeViolation, message)
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::DomainError, message)
    }

    pub fn type_violation(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::TypeViolation, message)
    }

    pub fn abort(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::InteractionAbort, message)
    }
}

impl From<crate::canvas::CanvasError> for OpError {
    fn from(e: crate::canvas::CanvasError) -> Self {
        use crate::canvas::CanvasError as C;
        let kind = match e {
            C::NoOpenText => ErrorKind::DomainError,
            _ => ErrorKind::RangeViolation,
        };
        OpError::new(kind, e.to_string())
    }
}

impl From<crate::interaction::InteractionError> for OpError {
    fn from(e: crate::interaction::InteractionError) -> Self {
        OpError::abort(e.to_string())
    }
}

/// An error that aborted a run. `position` is the code-word index of the
/// command that raised it.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[error("{kind} in {op} at word {position}: {message}")]
pub struct RuntimeError {
    pub kind: ErrorKind,
    pub op: String,
    pub message: String,
    pub position: usize,
}
