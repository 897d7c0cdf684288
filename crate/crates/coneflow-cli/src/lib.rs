//! Experiment harness for `coneflow`: configuration, the individual suites,
//! property checks on certified geometry, the properness dichotomy, and
//! report writing.

pub mod checks;
pub mod config;
pub mod dichotomy;
pub mod report;
pub mod setup;
pub mod suites;

pub use config::ExperimentConfig;
pub use dichotomy::{dichotomy_report, DichotomyReport};
pub use report::Report;
pub use setup::Setup;

use coneflow::fine_graph::BuildError;
use coneflow::group_models::GroupError;

/// Exit status for runs where every invariant held.
pub const EXIT_OK: i32 = 0;
/// Exit status when some invariant failed.
pub const EXIT_VIOLATION: i32 = 1;
/// Exit status for configuration and validation errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status when the vertex budget was exhausted.
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid group: {0}")]
    Group(#[from] GroupError),
    #[error("resource cap: {0}")]
    Resource(BuildError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Resource(_) => EXIT_RESOURCE,
            HarnessError::Io(_) | HarnessError::Csv(_) => EXIT_VIOLATION,
            HarnessError::Config(_) | HarnessError::Group(_) => EXIT_CONFIG,
        }
    }
}

impl From<BuildError> for HarnessError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::ResourceCap { .. } => HarnessError::Resource(e),
            BuildError::BadSource => HarnessError::Config(e.to_string()),
        }
    }
}
