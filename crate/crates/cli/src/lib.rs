//! Model files, command dispatch and reports for the `hsys` binary.

pub mod commands;
pub mod lex;
pub mod model;
pub mod parse;
pub mod report;
