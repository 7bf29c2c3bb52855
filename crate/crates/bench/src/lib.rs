//! Experiment runner for the GA attacks: configs with per-algorithm
//! defaults, repeated runs with baseline and attacked metrics, parameter
//! sweeps and CSV / aligned-table reports.

pub mod config;
pub mod dataset;
pub mod error;
pub mod experiment;
pub mod report;

pub use config::{algorithm_defaults, AlgorithmDefaults, ExperimentConfig, ALGORITHMS};
pub use dataset::{Dataset, DatasetSource};
pub use error::BenchError;
pub use experiment::{run_experiment, run_experiments, sweep, SweepAxis};
pub use report::{parse_csv, render, to_csv, to_table, ReportFormat, ResultRow};
