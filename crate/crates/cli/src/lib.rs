//! Problem and report files plus the subcommands behind the `t2soco`
//! binary.

pub mod commands;
pub mod files;
