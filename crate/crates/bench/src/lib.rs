//! Replication benchmark for the probit Bayes factor estimators.
//!
//! Loads a CSV dataset, fits two nested probit models, then repeats every
//! selected estimator of `B01 = m0 / m1` over independent replications and
//! reports medians, standard deviations and mean wall times.

pub mod config;
pub mod data;
pub mod error;
pub mod output;
pub mod runner;

pub use config::{parse_estimators, BenchConfig, EstimatorId, OutputFormat};
pub use data::{load_csv, load_pima_csv, read_csv, PIMA_COVARIATES, RESPONSE_COLUMN};
pub use error::{BenchError, Result};
pub use output::{write_csv, write_json, write_report};
pub use runner::{
    run_benchmark, run_benchmark_on, run_replication, summarize, BenchReport, EstimatorRuns,
    Prepared, Summary,
};
