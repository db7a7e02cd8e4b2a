//! Library behind the `elemop` command-line tool: run reports, the
//! randomized property suites, witness search, and the commands.

pub mod commands;
pub mod report;
pub mod search;
pub mod suites;
