//! Configuration, run/sweep orchestration, data export, and the
//! self-validation suite.

pub mod config;
pub mod runner;
pub mod validate;

pub use config::{ConfigBuilder, GridSpec, MetricName, RunConfig, SweepAxis, SweepConfig};
pub use runner::{run, run_to_files, sweep, MetricRow, MetricTable, SweepPoint};
pub use validate::{validate, CheckResult, FaultInjection, ValidationReport};
