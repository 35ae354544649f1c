//! Command-line front end and file formats for `pwx-core`.
//!
//! * [`mapfile`] reads and writes `.pwmap` map descriptions.
//! * [`cli`] implements the `pwx` subcommands and their CSV output.

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod format;
pub mod mapfile;
pub mod sweep;
