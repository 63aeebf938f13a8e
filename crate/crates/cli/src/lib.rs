//! Reports and experiment tables over `toric_core`.
//!
//! Varieties and experiments are JSON documents; reports are plain text and
//! experiment output is CSV with a `# seed=… version=…` first line.

mod error;
pub mod fixtures;
mod report;
mod spec;
mod target;

pub use error::CliError;
pub use fixtures::{fixture, fixture_names, fixture_text};
pub use report::{run_check, run_experiment, run_sections, CheckReport, SectionsTable, Table};
pub use spec::{
    parse_experiment, parse_variety, ExperimentKind, ExperimentSpec, FamiliesConfig, GridConfig, SequenceSpec,
    Variety, VarietySpec,
};
pub use target::Target;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
