//! Command-line front end for `stabpath-core`: file formats, reports and subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod decomposition_file;
pub mod failure;
pub mod model_file;
pub mod parse;
pub mod report;
pub mod trace;
