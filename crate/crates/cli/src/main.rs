use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use treesort::bench::{
    format_edge_list, format_tree_file, parse_edge_list, parse_tree_file, run_plan, run_trial,
    verify_edges, write_aggregates_csv, write_outcome_json, write_records_csv, BenchError,
    BenchPlan, CsvRecordSink, RunOptions, TreeSource, VerifyMode,
};
use treesort::generators::{generate, FamilyKind, FamilySpec};
use treesort::{Algorithm, TreePoset};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERRUPTED: u8 = 130;

#[derive(Parser)]
#[command(
    name = "treesort",
    version,
    about = "Sort tree partial orders through a counting comparison oracle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover the edges of one tree and print them as `parent child` lines.
    Sort(SortArgs),
    /// Run an algorithm × family × size matrix and emit per-trial records.
    Bench(BenchArgs),
    /// Check recovered edges against a fresh oracle.
    Verify(VerifyArgs),
    /// Write a generated tree in tree-file format.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct TreeArgs {
    /// Tree file (`n` on the first line, then parent indices, -1 for the root).
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    #[arg(long, default_value = "random_attachment")]
    family: FamilyKind,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
}

impl TreeArgs {
    fn load(&self, seed: u64) -> Result<(TreePoset, String), CliError> {
        match &self.input {
            Some(path) => Ok((parse_tree_file(&read(path)?)?, "file".to_string())),
            None => {
                let spec = FamilySpec::new(self.family, self.n, self.d, seed);
                Ok((
                    generate(&spec).map_err(BenchError::from)?,
                    self.family.to_string(),
                ))
            }
        }
    }
}

#[derive(Args)]
struct SortArgs {
    #[command(flatten)]
    tree: TreeArgs,
    #[arg(long, default_value = "optimized")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge list destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct BenchArgs {
    /// Fixed tree file used instead of generated families.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "centroid,optimized,deterministic"
    )]
    algorithm: Vec<Algorithm>,
    #[arg(long, value_delimiter = ',', default_value = "random_attachment")]
    family: Vec<FamilyKind>,
    #[arg(long, value_delimiter = ',', default_value = "100")]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    d: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Seed of the first trial; trial `t` uses `seed + t`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Record destination; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// With csv format, also write per-cell aggregates to this file.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

impl BenchArgs {
    fn sources(&self) -> Result<Vec<TreeSource>, CliError> {
        if let Some(path) = &self.input {
            return Ok(vec![TreeSource::Fixed {
                label: "file".to_string(),
                tree: Arc::new(parse_tree_file(&read(path)?)?),
            }]);
        }
        let mut sources = Vec::new();
        for &kind in &self.family {
            // chains and stars ignore d, so one cell per size is enough
            let degrees = if kind.uses_degree() {
                &self.d[..]
            } else {
                &self.d[..1.min(self.d.len())]
            };
            for &n in &self.n {
                for &d in degrees {
                    sources.push(TreeSource::Family { kind, n, d });
                }
            }
        }
        Ok(sources)
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    tree: TreeArgs,
    #[arg(long, default_value = "optimized")]
    algorithm: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `exhaustive` or `sampled:K`.
    #[arg(long, default_value = "exhaustive")]
    verify_mode: VerifyMode,
    /// Check this edge list instead of running the algorithm.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    family: FamilyKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Bench(BenchError),
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        CliError::Bench(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Bench(BenchError::Io(e))
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_sort(args: &SortArgs) -> Result<ExitCode, CliError> {
    let (tree, family) = args.tree.load(args.seed)?;
    let (report, record) = run_trial(&tree, &family, args.algorithm, args.seed)?;
    let mut out = open_output(args.output.as_deref())?;
    out.write_all(format_edge_list(&report.edges).as_bytes())?;
    out.flush()?;
    write_records_csv(io::stderr().lock(), &[record])?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode, CliError> {
    let plan = BenchPlan {
        sources: args.sources()?,
        algorithms: args.algorithm.clone(),
        trials: args.trials,
        base_seed: args.seed,
    };
    let stop = Arc::new(AtomicBool::new(false));
    {
        let stop = Arc::clone(&stop);
        // a second handler cannot be installed; benches then just can't be interrupted cleanly
        let _ = ctrlc::set_handler(move || stop.store(true, Ordering::SeqCst));
    }
    let options = RunOptions {
        jobs: args.jobs,
        stop: Some(&stop),
    };
    let out = open_output(args.output.as_deref())?;

    let outcome = match args.format {
        Format::Csv => {
            let mut sink = CsvRecordSink::new(out)?;
            let outcome = run_plan(&plan, options, |r| sink.write(r))?;
            sink.into_inner()?.flush()?;
            if let Some(path) = &args.summary {
                let file = File::create(path)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                write_aggregates_csv(BufWriter::new(file), &outcome.aggregates)?;
            }
            outcome
        }
        Format::Json => {
            let outcome = run_plan(&plan, options, |_| Ok(()))?;
            let mut out = out;
            write_outcome_json(&mut out, &outcome)?;
            out.flush()?;
            outcome
        }
    };

    if outcome.interrupted {
        eprintln!(
            "interrupted after {} of {} trials",
            outcome.records.len(),
            plan.trial_count()
        );
        return Ok(ExitCode::from(EXIT_INTERRUPTED));
    }
    let wrong = outcome.records.iter().filter(|r| !r.correct).count();
    if wrong > 0 {
        eprintln!("{wrong} trial(s) recovered wrong edges");
        return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let (tree, family) = args.tree.load(args.seed)?;
    let edges = match &args.edges {
        Some(path) => parse_edge_list(&read(path)?)?,
        None => {
            run_trial(&tree, &family, args.algorithm, args.seed)?
                .0
                .edges
        }
    };
    let report = verify_edges(&tree, &edges, args.verify_mode, args.seed);
    if let Some(e) = &report.structural_error {
        println!("FAIL: recovered edges are not a tree: {e}");
        return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
    }
    if let Some(m) = &report.mismatch {
        println!("FAIL after {} pairs: {m}", report.pairs_checked);
        return Ok(ExitCode::from(EXIT_VERIFY_FAILED));
    }
    println!(
        "PASS: {} pairs checked ({})",
        report.pairs_checked, args.verify_mode
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode, CliError> {
    let spec = FamilySpec::new(args.family, args.n, args.d, args.seed);
    let tree = generate(&spec).map_err(BenchError::from)?;
    let mut out = open_output(args.output.as_deref())?;
    out.write_all(format_tree_file(&tree).as_bytes())?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sort(a) => cmd_sort(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Generate(a) => cmd_generate(a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(CliError::Bench(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
