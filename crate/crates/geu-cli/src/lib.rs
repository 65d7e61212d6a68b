//! Library side of the `geu` command: document parsing, the commands and
//! the fuzz harness, kept out of `main` so tests can drive them directly.

// Errors carry their witnesses by value; boxing them would only obscure
// the matches that inspect them.
#![allow(clippy::result_large_err)]

pub mod commands;
pub mod document;
pub mod error;
pub mod fuzz;
pub mod report;

pub use document::{load, parse_problem, Problem};
pub use error::{CliError, EXIT_FAILURE, EXIT_INPUT, EXIT_OK};
pub use report::{Format, Report};
