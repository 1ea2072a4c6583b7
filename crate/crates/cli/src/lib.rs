//! Library half of the `qtoeplitz` command-line tool: file formats, error
//! codes, and the command implementations, kept out of `main` so the
//! integration tests can drive them directly.

pub mod commands;
pub mod error;
pub mod format;
