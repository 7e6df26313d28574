//! Parallel experiment runner over the `symfam-core` family and statistics
//! library: config files, rayon-backed profiles, CSV/JSON reports, the Weil
//! expression language and scan tables.

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod registry;
pub mod scan;
pub mod weil_expr;

pub use config::ExperimentConfig;
pub use error::{RunError, RunResult};
pub use experiment::{parallel_profile, FamilyResult, Runner};
pub use symfam_core as core;
