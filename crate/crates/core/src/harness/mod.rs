//! Instance files, generators and the Monte Carlo trial runner.

mod generate;
mod instance;
mod stats;
mod trials;

pub use generate::{builtin, Generator, BUILTINS};
pub use instance::{Instance, InstanceSpec, LaminarSet, MatroidSpec, SCHEMA_VERSION};
pub use stats::{clopper_pearson_lower, Quantiles, Rate};
pub use trials::{run_trial, run_trials, Algorithm, Report, RunConfig, Summary, TrialReport, REPORT_SCHEMA_VERSION};

use std::path::Path;

use crate::error::Result;

/// Resolves `builtin:NAME` or a path to an instance file.
pub fn resolve_instance(arg: &str) -> Result<InstanceSpec> {
    match arg.strip_prefix("builtin:") {
        Some(name) => builtin(name),
        None => InstanceSpec::load(Path::new(arg)),
    }
}
