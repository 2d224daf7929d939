//! Scenario runner for `krlab-core`: TOML configuration, CSV input and
//! output, deterministic JSON reports and the `krlab` command line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csvio;
pub mod json;
pub mod scenario;

pub use config::{ScenarioConfig, ScenarioKind};
pub use scenario::{run_scenario, RunArtifact};

/// Process exit code when every check passed or failed as expected.
pub const EXIT_PASS: i32 = 0;
/// A check failed that was not on the expected list.
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) | Self::Io(_) => EXIT_NUMERICAL,
        }
    }
}
