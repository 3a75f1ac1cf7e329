//! Trial execution, per-trial records and per-cell aggregates.

use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{run_algorithm, Algorithm, AlgorithmReport};
use crate::generators::{generate, FamilyKind, FamilySpec};
use crate::oracle::CountingOracle;
use crate::poset::TreePoset;

use super::BenchError;

/// Column order of the per-trial CSV table.
pub const CSV_COLUMNS: [&str; 11] = [
    "algorithm",
    "family",
    "n",
    "d",
    "w",
    "seed",
    "total_queries",
    "distinct_queries",
    "retries",
    "wall_time_ns",
    "correct",
];

/// One trial: a single algorithm run on a single tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algorithm: String,
    pub family: String,
    /// Shape of the tree actually sorted.
    pub n: usize,
    pub d: usize,
    pub w: usize,
    pub seed: u64,
    pub total_queries: u64,
    pub distinct_queries: u64,
    pub retries: u64,
    pub wall_time_ns: u64,
    /// Recovered edges equal the ground truth.
    pub correct: bool,
}

impl BenchRecord {
    /// The record with its timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        BenchRecord {
            wall_time_ns: 0,
            ..self.clone()
        }
    }
}

/// Sorts `tree` once and checks the result against its ground truth.
pub fn run_trial(
    tree: &TreePoset,
    family: &str,
    algorithm: Algorithm,
    seed: u64,
) -> Result<(AlgorithmReport, BenchRecord), BenchError> {
    let mut oracle = CountingOracle::new(tree);
    let report = run_algorithm(algorithm, &mut oracle, seed)?;
    let stats = tree.stats();
    let record = BenchRecord {
        algorithm: algorithm.name().to_string(),
        family: family.to_string(),
        n: stats.n,
        d: stats.max_degree,
        w: stats.width,
        seed,
        total_queries: report.total_queries,
        distinct_queries: report.distinct_queries,
        retries: report.retries,
        wall_time_ns: u64::try_from(report.wall_time.as_nanos()).unwrap_or(u64::MAX),
        correct: report.edges == tree.ground_truth_edges(),
    };
    Ok((report, record))
}

/// Where the trees of a benchmark cell come from.
#[derive(Debug, Clone)]
pub enum TreeSource {
    /// A generated family; random families are re-drawn with each trial's seed.
    Family {
        kind: FamilyKind,
        n: usize,
        d: usize,
    },
    /// A fixed tree, e.g. loaded from a file.
    Fixed { label: String, tree: Arc<TreePoset> },
}

impl TreeSource {
    pub fn label(&self) -> String {
        match self {
            TreeSource::Family { kind, .. } => kind.name().to_string(),
            TreeSource::Fixed { label, .. } => label.clone(),
        }
    }

    fn tree(&self, seed: u64) -> Result<Arc<TreePoset>, BenchError> {
        match self {
            TreeSource::Family { kind, n, d } => {
                Ok(Arc::new(generate(&FamilySpec::new(*kind, *n, *d, seed))?))
            }
            TreeSource::Fixed { tree, .. } => Ok(Arc::clone(tree)),
        }
    }

    fn requested(&self) -> (usize, usize) {
        match self {
            TreeSource::Family { n, d, .. } => (*n, *d),
            TreeSource::Fixed { tree, .. } => {
                let s = tree.stats();
                (s.n, s.max_degree)
            }
        }
    }
}

/// Benchmark matrix: every source × every algorithm × `trials` seeds.
/// Trial `t` uses seed `base_seed + t`, both for drawing the tree and for
/// the algorithm.
#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub sources: Vec<TreeSource>,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub base_seed: u64,
}

impl BenchPlan {
    pub fn trial_count(&self) -> usize {
        self.sources.len() * self.algorithms.len() * self.trials
    }

    fn cells(&self) -> Vec<(&TreeSource, Algorithm)> {
        self.sources
            .iter()
            .flat_map(|s| self.algorithms.iter().map(move |&a| (s, a)))
            .collect()
    }
}

/// Summary over the trials of one (source, algorithm) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub algorithm: String,
    pub family: String,
    /// Requested size and degree parameter of the cell.
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    pub mean_total_queries: f64,
    pub max_total_queries: u64,
    pub mean_distinct_queries: f64,
    pub mean_retries: f64,
    pub mean_wall_time_ns: f64,
    /// Mean of `total_queries / (d · n · log₂ n)`; empty when `n ≤ 1`.
    pub ratio_dnlogn: Option<f64>,
    /// Mean of `total_queries / (w · n + n · log₂ n)`; empty when `n ≤ 1`.
    pub ratio_wn_nlogn: Option<f64>,
    pub all_correct: bool,
}

fn mean<I: Iterator<Item = f64>>(values: I) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn aggregate(source: &TreeSource, algorithm: Algorithm, records: &[BenchRecord]) -> Aggregate {
    let (n, d) = source.requested();
    let q = |r: &BenchRecord| r.total_queries as f64;
    let big = || records.iter().filter(|r| r.n > 1);
    let log = |r: &BenchRecord| (r.n as f64).log2();
    Aggregate {
        algorithm: algorithm.name().to_string(),
        family: source.label(),
        n,
        d,
        trials: records.len(),
        mean_total_queries: mean(records.iter().map(q)).unwrap_or(0.0),
        max_total_queries: records.iter().map(|r| r.total_queries).max().unwrap_or(0),
        mean_distinct_queries: mean(records.iter().map(|r| r.distinct_queries as f64))
            .unwrap_or(0.0),
        mean_retries: mean(records.iter().map(|r| r.retries as f64)).unwrap_or(0.0),
        mean_wall_time_ns: mean(records.iter().map(|r| r.wall_time_ns as f64)).unwrap_or(0.0),
        ratio_dnlogn: mean(big().map(|r| q(r) / (r.d as f64 * r.n as f64 * log(r)))),
        ratio_wn_nlogn: mean(big().map(|r| q(r) / (r.w as f64 * r.n as f64 + r.n as f64 * log(r)))),
        all_correct: records.iter().all(|r| r.correct),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub aggregates: Vec<Aggregate>,
    /// The run was stopped early; only completed trials are included.
    pub interrupted: bool,
}

#[derive(Debug, Default, Clone, Copy)]
pub struct RunOptions<'a> {
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    /// Checked between batches; once set, no new trials start.
    pub stop: Option<&'a AtomicBool>,
}

/// Runs every trial of `plan` on a worker pool. Records reach `on_record`
/// and the outcome in matrix order regardless of completion order.
pub fn run_plan<F>(
    plan: &BenchPlan,
    options: RunOptions<'_>,
    mut on_record: F,
) -> Result<BenchOutcome, BenchError>
where
    F: FnMut(&BenchRecord) -> Result<(), BenchError>,
{
    let cells = plan.cells();
    let trials: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|cell| (0..plan.trials as u64).map(move |t| (cell, t)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.jobs)
        .build()
        .map_err(|e| BenchError::Pool(e.to_string()))?;
    let batch = pool.current_num_threads().max(1) * 4;

    let mut per_cell: Vec<Vec<BenchRecord>> = vec![Vec::new(); cells.len()];
    let mut records = Vec::with_capacity(trials.len());
    let mut interrupted = false;
    for chunk in trials.chunks(batch) {
        if options.stop.is_some_and(|s| s.load(Ordering::SeqCst)) {
            interrupted = true;
            break;
        }
        let results: Vec<Result<BenchRecord, BenchError>> = pool.install(|| {
            chunk
                .par_iter()
                .map(|&(cell, t)| {
                    let (source, algorithm) = cells[cell];
                    let seed = plan.base_seed.wrapping_add(t);
                    let tree = source.tree(seed)?;
                    run_trial(&tree, &source.label(), algorithm, seed).map(|(_, r)| r)
                })
                .collect()
        });
        for (&(cell, _), result) in chunk.iter().zip(results) {
            let record = result?;
            on_record(&record)?;
            per_cell[cell].push(record.clone());
            records.push(record);
        }
    }

    let aggregates = cells
        .iter()
        .zip(&per_cell)
        .filter(|(_, rs)| !rs.is_empty())
        .map(|(&(source, algorithm), rs)| aggregate(source, algorithm, rs))
        .collect();
    Ok(BenchOutcome {
        records,
        aggregates,
        interrupted,
    })
}

/// Streams records as CSV rows with the fixed [`CSV_COLUMNS`] header.
pub struct CsvRecordSink<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> CsvRecordSink<W> {
    pub fn new(out: W) -> Result<Self, BenchError> {
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        writer.write_record(CSV_COLUMNS)?;
        writer.flush()?;
        Ok(CsvRecordSink { writer })
    }

    pub fn write(&mut self, record: &BenchRecord) -> Result<(), BenchError> {
        self.writer.serialize(record)?;
        // flushed per row so an interrupted run keeps what it finished
        self.writer.flush()?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W, BenchError> {
        self.writer
            .into_inner()
            .map_err(|e| BenchError::Io(e.into_error()))
    }
}

pub fn write_records_csv<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), BenchError> {
    let mut sink = CsvRecordSink::new(out)?;
    for r in records {
        sink.write(r)?;
    }
    Ok(())
}

pub fn write_aggregates_csv<W: Write>(out: W, aggregates: &[Aggregate]) -> Result<(), BenchError> {
    let mut writer = csv::Writer::from_writer(out);
    for a in aggregates {
        writer.serialize(a)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_outcome_json<W: Write>(mut out: W, outcome: &BenchOutcome) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(&mut out, outcome)?;
    out.write_all(b"\n")?;
    Ok(())
}
