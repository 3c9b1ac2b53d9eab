//! Immediate observation nets (IO nets) and reconfigurable broadcast networks
//! (RBN) over counting configurations.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! * the two formalisms with their exact one-step semantics ([`IoNet`], [`Rbn`]),
//! * the translation of an IO net into an RBN whose processes broadcast their
//!   own state ([`translate::io_to_rbn`]), together with the certificate used to
//!   transport configurations and cubes,
//! * explicit-state breadth-first reachability for fixed populations
//!   ([`explicit`]), used as ground truth,
//! * population-independent decision procedures for cardinality reachability
//!   queries ([`symbolic`]).
//!
//! Everything is a pure function over immutable values; all types are `Send +
//! Sync`.

#![no_std]

extern crate alloc;

mod config;
mod cube;
mod error;
mod ionet;
mod name;
mod net;
mod rbn;
mod trace;

pub mod explicit;
pub mod symbolic;
pub mod translate;

pub use config::Configuration;
pub use cube::{Bound, Cube, CubeRole, Interval};
pub use error::{ModelError, StepError};
pub use ionet::{IoNet, IoTransition};
pub use name::{MessageId, StateId};
pub use net::{ModelKind, Net, TransitionSystem};
pub use rbn::{Action, Rbn, RbnStep, RbnTransition};
pub use trace::{ReplayError, Step, Trace};
