//! Command-line harness for `dgbo-core`: config loading, provenance, exit
//! statuses and the subcommands behind the `dgbo` binary.

pub mod commands;
pub mod config;
pub mod exit;
pub mod provenance;
