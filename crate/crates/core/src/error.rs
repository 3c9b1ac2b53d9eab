use alloc::string::String;

use crate::{MessageId, StateId};

/// Errors raised while building nets, cubes and configurations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("invalid name {0:?}: expected letters, digits, '_' or '\\''")]
    InvalidName(String),

    #[error("state {0} declared twice")]
    DuplicateState(StateId),

    #[error("message {0} declared twice")]
    DuplicateMessage(MessageId),

    #[error("undeclared state {0}")]
    UndeclaredState(StateId),

    #[error("undeclared message {0}")]
    UndeclaredMessage(MessageId),

    #[error("duplicate transition {0}")]
    DuplicateTransition(String),

    #[error("inconsistent cube: lower bound exceeds upper bound for {0}")]
    Inconsistent(StateId),
}

/// Errors raised when a single step cannot be applied.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("step {0} is not enabled")]
    Disabled(String),

    #[error("transition {0} is not part of the net")]
    UnknownTransition(String),

    #[error("receive on {received} does not match broadcast of {broadcast}")]
    MessageMismatch {
        broadcast: MessageId,
        received: MessageId,
    },

    #[error("malformed step: {0}")]
    Malformed(String),

    #[error("step kind does not belong to this model")]
    WrongModel,
}
