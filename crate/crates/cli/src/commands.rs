//! Subcommand handlers.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use esg_core::aggregate::{build_feature_matrix, FeatureLayout, FeatureMatrix};
use esg_core::config::PipelineConfig;
use esg_core::corpus::{
    build_queries, collect, load_corpus, save_corpus, CollectError, FixtureAdapter, ThreadSleeper,
};
use esg_core::eval::{
    self, evaluate, load_metrics, load_ratings, save_comparison, save_report, ComparisonRow,
    SplitParams, METRICS_FILE,
};
use esg_core::io::write_atomic;
use esg_core::models::{self, ModelArtifact, ModelKind};
use esg_core::sentiment::{load_scored, save_scored, score_batch};
use esg_core::synth::{self, SynthParams};

use crate::{Cli, Command};

/// A failed run and the exit status it maps to.
pub struct Failure {
    pub error: anyhow::Error,
    internal: bool,
}

impl Failure {
    pub fn code(&self) -> u8 {
        if self.internal {
            2
        } else {
            1
        }
    }
}

/// Bad input, usage or configuration.
fn user(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        error: error.into(),
        internal: false,
    }
}

/// Anything the user could not have caused, such as failing to write output.
fn internal(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        error: error.into(),
        internal: true,
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cli: Cli) -> Outcome {
    let mut config = match &cli.config {
        Some(path) => PipelineConfig::load(path).map_err(user)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    match cli.command {
        Command::Ingest(a) => ingest(&config, &a.source, &a.out, a.target_count),
        Command::Score(a) => score(&config, &a.corpus, &a.out, a.workers),
        Command::Aggregate(a) => aggregate(&config, &a.scored, &a.out, a.min_docs, a.per_network),
        Command::Train(a) => train(&config, &a.features, &a.ratings, &a.model, &a.out),
        Command::Evaluate(a) => evaluate_cmd(
            &config,
            &a.features,
            &a.ratings,
            &a.model,
            &a.out,
            a.split_fraction,
        ),
        Command::Predict(a) => predict(&a.model, &a.features, a.out.as_deref()),
        Command::Report(a) => report(&a.input, a.out.as_deref()),
        Command::Synthesize(a) => {
            let params = SynthParams {
                n_companies: a.companies,
                docs_per_keyword: a.docs_per_keyword,
                rating_noise: a.rating_noise,
                distractors: !a.no_distractors,
                seed: config.seed,
            };
            synthesize(&config, params, &a.out)
        }
    }
}

fn ingest(config: &PipelineConfig, source: &Path, out: &Path, target: Option<usize>) -> Outcome {
    if config.companies.is_empty() {
        return Err(user(anyhow!(
            "no companies configured; pass --config with a companies list"
        )));
    }
    let target = target.unwrap_or(config.target_count);
    let docs = load_corpus(source)
        .with_context(|| format!("reading source {}", source.display()))
        .map_err(user)?;
    let mut adapter = FixtureAdapter::new(source.display().to_string(), docs);
    let mut sleeper = ThreadSleeper;
    let mut corpus = Vec::new();
    let mut seen = BTreeSet::new();
    let mut shortfalls = 0usize;
    for company in &config.companies {
        for query in build_queries(company, &config.taxonomy).map_err(user)? {
            let got = match collect(
                &mut adapter,
                &query,
                target,
                &config.rate_policy,
                &mut sleeper,
            ) {
                Ok(c) => {
                    shortfalls += usize::from(c.shortfall.is_some());
                    c.documents
                }
                Err(CollectError::RetriesExhausted {
                    query,
                    retries,
                    partial,
                }) => {
                    log::warn!(
                        "{query}: giving up after {retries} retries, keeping {} documents",
                        partial.len()
                    );
                    partial
                }
                Err(e) => return Err(user(e)),
            };
            for doc in got {
                if seen.insert(doc.id.clone()) {
                    corpus.push(doc);
                }
            }
        }
    }
    log::info!(
        "ingested {} documents for {} companies ({shortfalls} queries short of {target})",
        corpus.len(),
        config.companies.len()
    );
    save_corpus(out, &corpus).map_err(internal)
}

fn score(config: &PipelineConfig, corpus: &Path, out: &Path, workers: Option<usize>) -> Outcome {
    let docs = load_corpus(corpus)
        .with_context(|| format!("reading corpus {}", corpus.display()))
        .map_err(user)?;
    if docs.is_empty() {
        return Err(user(anyhow!(
            "empty corpus: {} has no documents",
            corpus.display()
        )));
    }
    let lexicon = config.lexicon().map_err(user)?;
    let profiles = config.profiles();
    let scored = score_batch(
        &docs,
        &lexicon,
        &profiles,
        &config.taxonomy,
        workers.unwrap_or(config.workers),
    )
    .map_err(user)?;
    let relevant = scored.iter().filter(|s| s.result.relevant).count();
    log::info!("scored {} documents, {relevant} relevant", scored.len());
    save_scored(out, &scored).map_err(internal)
}

fn aggregate(
    config: &PipelineConfig,
    scored: &Path,
    out: &Path,
    min_docs: Option<usize>,
    per_network: bool,
) -> Outcome {
    let scored = load_scored(scored)
        .with_context(|| format!("reading scored documents {}", scored.display()))
        .map_err(user)?;
    let layout = if per_network {
        FeatureLayout::PerNetwork
    } else {
        config.feature_layout
    };
    let matrix = build_feature_matrix(
        &scored,
        &config.taxonomy,
        min_docs.unwrap_or(config.min_docs),
        layout,
    )
    .map_err(user)?;
    log::info!(
        "{} companies x {} features",
        matrix.n_rows(),
        matrix.n_features()
    );
    matrix.save(out).map_err(internal)
}

fn load_inputs(features: &Path, ratings: &Path) -> Result<(FeatureMatrix, eval::Ratings), Failure> {
    let matrix = FeatureMatrix::load(features)
        .with_context(|| format!("reading features {}", features.display()))
        .map_err(user)?;
    let ratings = load_ratings(ratings)
        .with_context(|| format!("reading ratings {}", ratings.display()))
        .map_err(user)?;
    Ok((matrix, ratings))
}

fn parse_kind(name: &str) -> Result<ModelKind, Failure> {
    name.parse::<ModelKind>().map_err(|e| user(anyhow!(e)))
}

fn train(
    config: &PipelineConfig,
    features: &Path,
    ratings: &Path,
    model: &str,
    out: &Path,
) -> Outcome {
    let kind = parse_kind(model)?;
    let (matrix, ratings) = load_inputs(features, ratings)?;
    let (x, y): (Vec<Vec<f64>>, Vec<f64>) = matrix
        .companies
        .iter()
        .zip(&matrix.values)
        .filter_map(|(c, row)| ratings.get(c).map(|r| (row.clone(), *r)))
        .unzip();
    let missing = matrix.n_rows() - y.len();
    if missing > 0 {
        log::warn!("{missing} companies have no rating and were left out");
    }
    let artifact = models::train(
        &x,
        &y,
        &config.hyperparams(kind, config.seed),
        &matrix.feature_names,
    )
    .map_err(user)?;
    log::info!("trained {kind} on {} companies", y.len());
    write_atomic(out, &artifact.to_json()).map_err(internal)
}

fn evaluate_cmd(
    config: &PipelineConfig,
    features: &Path,
    ratings: &Path,
    model: &str,
    out: &Path,
    split_fraction: Option<f64>,
) -> Outcome {
    let kinds: Vec<ModelKind> = if model.eq_ignore_ascii_case("all") {
        ModelKind::ALL.to_vec()
    } else {
        vec![parse_kind(model)?]
    };
    let (matrix, ratings) = load_inputs(features, ratings)?;
    let params = SplitParams {
        test_fraction: split_fraction.unwrap_or(config.split_fraction),
        seed: config.seed,
    };
    let mut rows = Vec::new();
    for kind in &kinds {
        let report = evaluate(
            &config.hyperparams(*kind, config.seed),
            &matrix,
            &ratings,
            params,
        )
        .map_err(user)?;
        let m = &report.metrics;
        log::info!(
            "{kind}: MAE {} r {} p {} (n_test {})",
            m.mae_display,
            m.pearson_r.map_or("n/a".into(), |r| format!("{r:.3}")),
            m.p_value.map_or("n/a".into(), |p| format!("{p:.4}")),
            m.n_test
        );
        let dir = if kinds.len() == 1 {
            out.to_path_buf()
        } else {
            out.join(kind.as_str())
        };
        save_report(&dir, &report).map_err(internal)?;
        rows.push(ComparisonRow::from(m));
    }
    if kinds.len() > 1 {
        save_comparison(out.join(COMPARISON_FILE), &rows).map_err(internal)?;
    }
    Ok(())
}

const COMPARISON_FILE: &str = "model_comparison.csv";

fn predict(model: &Path, features: &Path, out: Option<&Path>) -> Outcome {
    let bytes = std::fs::read(model)
        .with_context(|| format!("reading model {}", model.display()))
        .map_err(user)?;
    let artifact = ModelArtifact::from_json(&bytes).map_err(user)?;
    let matrix = FeatureMatrix::load(features)
        .with_context(|| format!("reading features {}", features.display()))
        .map_err(user)?;
    if matrix.feature_names != artifact.metadata.feature_names {
        return Err(user(anyhow!(
            "feature columns do not match the model's training columns ({} vs {})",
            matrix.feature_names.join(","),
            artifact.metadata.feature_names.join(",")
        )));
    }
    let mut csv = String::from("company,predicted\n");
    for (company, row) in matrix.companies.iter().zip(&matrix.values) {
        let p = artifact.predict(row).map_err(user)?;
        csv.push_str(&format!("{},{p}\n", csv_field(company)));
    }
    match out {
        Some(path) => write_atomic(path, csv.as_bytes()).map_err(internal),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(csv.as_bytes())
                .map_err(internal)
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn report(input: &Path, out: Option<&Path>) -> Outcome {
    let mut candidates: Vec<PathBuf> = vec![input.join(METRICS_FILE)];
    let entries = std::fs::read_dir(input)
        .with_context(|| format!("reading {}", input.display()))
        .map_err(user)?;
    for entry in entries {
        let entry = entry.map_err(internal)?;
        if entry.path().is_dir() {
            candidates.push(entry.path().join(METRICS_FILE));
        }
    }
    let mut rows = Vec::new();
    for path in candidates.into_iter().filter(|p| p.is_file()) {
        let m = load_metrics(&path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(user)?;
        rows.push(ComparisonRow::from(&m));
    }
    if rows.is_empty() {
        return Err(user(anyhow!(
            "no {METRICS_FILE} found under {}",
            input.display()
        )));
    }
    let order = |k: &ModelKind| ModelKind::ALL.iter().position(|x| x == k);
    rows.sort_by(|a, b| {
        order(&a.kind)
            .cmp(&order(&b.kind))
            .then(a.mae.total_cmp(&b.mae))
    });
    let dest = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| input.join(COMPARISON_FILE));
    save_comparison(&dest, &rows).map_err(internal)?;
    log::info!("wrote {} rows to {}", rows.len(), dest.display());
    Ok(())
}

fn synthesize(config: &PipelineConfig, params: SynthParams, out: &Path) -> Outcome {
    if params.n_companies < 2 || params.docs_per_keyword == 0 {
        return Err(user(anyhow!(
            "need at least 2 companies and 1 document per keyword"
        )));
    }
    if !(params.rating_noise >= 0.0 && params.rating_noise.is_finite()) {
        return Err(user(anyhow!(
            "rating noise must be a finite non-negative number"
        )));
    }
    let data = synth::generate(&params, &config.taxonomy);
    data.write_to(out, config).map_err(internal)?;
    log::info!(
        "wrote {} documents for {} companies to {}",
        data.documents.len(),
        data.profiles.len(),
        out.display()
    );
    Ok(())
}
