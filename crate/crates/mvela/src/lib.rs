//! File formats and the `mvela` command-line driver for [`mvela_core`].
//!
//! Every table is a headed CSV file; search spaces and selection reports are
//! JSON. Missing feature values are written as empty fields.

pub mod cli;
mod error;
pub mod io;

pub use error::{Error, Result};
