//! Standard-library companion to `hosb-core`: text formats, the worker
//! pool for benchmark runs, and the `hosb` command-line interface.

pub mod cli;
pub mod commands;
pub mod driver;
pub mod formats;
