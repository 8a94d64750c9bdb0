//! Configuration, the verification pipeline and report output.

pub mod cli;
pub mod config;
pub mod output;
pub mod pipeline;

pub use config::{Overrides, RunConfig};
pub use pipeline::{run_verify_paper, CheckResult, CheckVerdict, ReportBundle};
