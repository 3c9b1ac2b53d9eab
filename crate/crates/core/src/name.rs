use alloc::sync::Arc;
use core::fmt;

use crate::ModelError;

fn valid_token(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

macro_rules! name_type {
    ($(#[$meta:meta])* $ty:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $ty(Arc<str>);

        impl $ty {
            /// Validates `name` as a token of letters, digits, `_` and `'`.
            pub fn new(name: &str) -> Result<Self, ModelError> {
                if valid_token(name) {
                    Ok(Self(Arc::from(name)))
                } else {
                    Err(ModelError::InvalidName(name.into()))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// Name of a local state of a process.
    StateId
);

name_type!(
    /// Name of a broadcast message.
    MessageId
);

impl From<&StateId> for MessageId {
    fn from(q: &StateId) -> Self {
        MessageId(q.0.clone())
    }
}
