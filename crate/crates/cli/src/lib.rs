//! Document format and subcommands behind the `picard` binary.

pub mod commands;
pub mod doc;
