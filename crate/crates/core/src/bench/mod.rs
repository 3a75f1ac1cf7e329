//! Benchmark harness: file formats, trial records and output verification.

use thiserror::Error;

use crate::algorithms::SortError;
use crate::generators::GenerateError;
use crate::poset::{EdgeSetError, PosetError};

mod harness;
mod treefile;
mod verify;

pub use harness::{
    aggregate, run_plan, run_trial, write_aggregates_csv, write_outcome_json, write_records_csv,
    Aggregate, BenchOutcome, BenchPlan, BenchRecord, CsvRecordSink, RunOptions, TreeSource,
    CSV_COLUMNS,
};
pub use treefile::{format_edge_list, format_tree_file, parse_edge_list, parse_tree_file};
pub use verify::{verify_edges, Mismatch, VerifyMode, VerifyReport};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Edges(#[from] EdgeSetError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Sort(#[from] SortError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}
