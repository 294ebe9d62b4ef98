//! Problem files and commands of the `varsub` tool.

pub mod problem;
pub mod run;

pub use problem::ProblemFile;
pub use run::{catalog, run, CliError, Command, Options, Outcome, Problem};
