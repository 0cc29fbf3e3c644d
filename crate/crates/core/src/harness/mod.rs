//! Experiment harness: TOML configs in, reports and per-n traces out.

mod config;
mod report;
mod run;

pub use config::*;
pub use report::*;
pub use run::{run_experiment, RunError};
