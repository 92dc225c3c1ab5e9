//! `esg`: command-line driver for the ESG sentiment pipeline.
//!
//! Stages hand off through files: ingest writes a corpus (JSONL), score
//! writes scored documents (JSONL), aggregate writes a feature table (CSV),
//! train writes a model (JSON), evaluate writes holdout reports and report
//! assembles the cross-model comparison.
//!
//! Exit status: 0 on success, 1 for bad input or usage, 2 for internal
//! failures.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "esg",
    version,
    about = "Score companies on ESG from social text sentiment"
)]
struct Cli {
    /// Pipeline configuration (JSON). Defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Collect documents for the configured companies from a fixture source.
    Ingest(IngestArgs),
    /// Clean, filter and score a corpus.
    Score(ScoreArgs),
    /// Build the company-by-keyword feature table.
    Aggregate(AggregateArgs),
    /// Train one model on every rated company.
    Train(TrainArgs),
    /// Hold out a test split, train and write evaluation reports.
    Evaluate(EvaluateArgs),
    /// Predict scores with a trained model.
    Predict(PredictArgs),
    /// Assemble model_comparison.csv from evaluation outputs.
    Report(ReportArgs),
    /// Write a synthetic corpus, ratings and config with a planted signal.
    Synthesize(SynthesizeArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// JSONL file of recorded documents served as the source.
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Documents per query; overrides the config.
    #[arg(long)]
    target_count: Option<usize>,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (0 = all cores); overrides the config.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct AggregateArgs {
    #[arg(long)]
    scored: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Minimum documents per keyword; overrides the config.
    #[arg(long)]
    min_docs: Option<usize>,
    /// One column per (network, keyword) instead of pooling networks.
    #[arg(long)]
    per_network: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    ratings: PathBuf,
    /// rf, gbt (alias xgboost), knn or svr.
    #[arg(long)]
    model: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    ratings: PathBuf,
    /// rf, gbt, knn, svr or all.
    #[arg(long, default_value = "all")]
    model: String,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Test fraction; overrides the config.
    #[arg(long)]
    split_fraction: Option<f64>,
}

#[derive(Debug, Args)]
struct PredictArgs {
    /// Trained model file.
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    features: PathBuf,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Evaluation output directory; it and its subdirectories are searched
    /// for metrics.json.
    #[arg(long)]
    input: PathBuf,
    /// Defaults to <input>/model_comparison.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SynthesizeArgs {
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    companies: usize,
    #[arg(long, default_value_t = 6)]
    docs_per_keyword: usize,
    /// Bound on the uniform noise added to reference scores.
    #[arg(long, default_value_t = 5.0)]
    rating_noise: f64,
    /// Leave out documents that the relevance rules should reject.
    #[arg(long)]
    no_distractors: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match std::panic::catch_unwind(|| commands::run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(failure)) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code())
        }
        Err(_) => ExitCode::from(2),
    }
}
