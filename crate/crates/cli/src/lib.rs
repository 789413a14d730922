//! Table builders, output formatting and the validation suite behind the
//! `ising-edge` command-line tool.

pub mod checks;
pub mod output;
pub mod tables;
