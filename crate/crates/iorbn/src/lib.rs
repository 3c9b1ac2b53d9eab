//! File formats, command-line front end and randomized validation for
//! [`iorbn_core`].

pub mod cli;
pub mod format;
pub mod harness;
pub mod mutation;
