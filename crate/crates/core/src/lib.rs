//! Process-level benchmarking harness.
//!
//! Measures the wall-clock time of arbitrary command variants under a
//! controlled protocol (warmups, prepare hooks, priority and CPU-affinity
//! controls), aggregates the samples into summary statistics with factors
//! relative to the fastest variant, and renders the comparison as markdown,
//! CSV, JSON, or Tukey boxplot data.
//!
//! The crate is split along the pipeline:
//!
//! * [`measure`] — spawning and timing child processes.
//! * [`environment`] — best-effort priority/affinity controls.
//! * [`stats`] — summary statistics and relative factors.
//! * [`report`] — rendering and boxplot summarization.
//! * [`config`] / [`suite`] — suite configuration and orchestration.

pub mod config;
pub mod environment;
pub mod error;
pub mod measure;
pub mod report;
pub mod stats;
pub mod suite;

pub use config::{load_config, parse_config, OutputFormat, SuiteConfig};
pub use environment::{apply_environment, ControlStatus, EnvironmentReport};
pub use error::{Error, Result};
pub use measure::{run_benchmark, run_once, ExecutionVariant, MeasurementProtocol, SampleSet};
pub use report::{boxplot_data, BoxplotSummary, ComparisonReport};
pub use stats::{relativize, summarize, SummaryRow, SummaryStats};
pub use suite::{replay, resolve_program, run_suite, write_outputs};
