//! Corpus ingestion, report formats and the subcommands of the `isolocal` binary.

pub mod commands;
pub mod corpus;
pub mod families;
pub mod report;

pub use commands::{Exit, Options};
