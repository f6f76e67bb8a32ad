//! Monte Carlo experiments on weighted random intersection graphs.
//!
//! An [`ExperimentSpec`] names a grid of model parameters, a trial count and
//! the algorithms to run. [`run_experiment`] and friends execute it on a
//! worker pool and produce one [`TrialRecord`] per trial plus a
//! [`SummaryStats`]. Output is identical for any worker count.

pub mod error;
pub mod record;
pub mod runner;
pub mod spec;
pub mod stats;

pub use error::{exit, LabError, Result};
pub use record::{read_records, RecordWriter, TrialRecord, SCHEMA_LINE};
pub use runner::{run_experiment, run_to_files, run_to_writer, run_with, summary_json, trial_seed};
pub use spec::{AlgorithmKind, ExperimentSpec, GridPoint, OrderKind, Regime};
pub use stats::{summarize, PointSummary, RunningStats, StatSummary, SummaryStats};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/experiments.md")]
mod book_experiments {}
