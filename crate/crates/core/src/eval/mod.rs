//! Train/test splitting, holdout evaluation and report files.

mod report;
mod stats;

pub use report::{
    comparison_csv, load_metrics, predictions_csv, save_comparison, save_report, scatter_svg,
    ComparisonRow, METRICS_FILE, PREDICTIONS_FILE, SCATTER_FILE,
};
pub use stats::{
    ln_gamma, mae, p_value, pearson_r, regularized_incomplete_beta, student_t_cdf, t_two_sided,
    StatsError,
};

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aggregate::FeatureMatrix;
use crate::models::{self, Hyperparams, ModelError, ModelKind};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("invalid split: {0}")]
    Split(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("ratings line {line}: {reason}")]
    Ratings { line: usize, reason: String },
    #[error("no company has both features and a rating")]
    NoOverlap,
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Reference score for one company.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatingRecord {
    pub company: String,
    #[serde(rename = "score")]
    pub reference_score: f64,
}

/// Reference scores keyed by canonical company name.
pub type Ratings = BTreeMap<String, f64>;

/// Parses a `company,score` CSV. Companies must be unique and scores in [0, 100].
pub fn parse_ratings<R: Read>(reader: R) -> Result<Ratings, EvalError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["company", "score"] {
        return Err(EvalError::Ratings {
            line: 1,
            reason: format!(
                "expected header company,score, got {}",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut out = Ratings::new();
    for (i, rec) in rdr.deserialize::<RatingRecord>().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| EvalError::Ratings {
            line,
            reason: e.to_string(),
        })?;
        if rec.company.is_empty() {
            return Err(EvalError::Ratings {
                line,
                reason: "empty company".into(),
            });
        }
        if !(0.0..=100.0).contains(&rec.reference_score) {
            return Err(EvalError::Ratings {
                line,
                reason: format!("score {} outside [0, 100]", rec.reference_score),
            });
        }
        if out
            .insert(rec.company.clone(), rec.reference_score)
            .is_some()
        {
            return Err(EvalError::Ratings {
                line,
                reason: format!("duplicate company {:?}", rec.company),
            });
        }
    }
    Ok(out)
}

pub fn load_ratings(path: impl AsRef<Path>) -> Result<Ratings, EvalError> {
    parse_ratings(std::fs::File::open(path)?)
}

pub fn ratings_csv(ratings: &Ratings) -> Result<Vec<u8>, EvalError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["company", "score"])?;
    for (c, s) in ratings {
        w.write_record([c.clone(), s.to_string()])?;
    }
    w.into_inner().map_err(|e| EvalError::Io(e.into_error()))
}

/// Train and test sides of a split, each sorted by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

/// Shuffles the (sorted, deduplicated) companies with `seed` and takes the
/// first `round(test_fraction * n)` as the test side.
pub fn split(companies: &[String], test_fraction: f64, seed: u64) -> Result<Split, EvalError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(EvalError::Split(format!(
            "test fraction {test_fraction} not in (0, 1)"
        )));
    }
    let unique: BTreeSet<&String> = companies.iter().collect();
    let n = unique.len();
    if n < 2 {
        return Err(EvalError::Split(format!(
            "need at least 2 companies, got {n}"
        )));
    }
    let n_test = (test_fraction * n as f64).round() as usize;
    if n_test == 0 || n_test == n {
        return Err(EvalError::Split(format!(
            "fraction {test_fraction} of {n} companies leaves an empty side"
        )));
    }
    let mut order: Vec<String> = unique.into_iter().cloned().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut test = order[..n_test].to_vec();
    let mut train = order[n_test..].to_vec();
    test.sort();
    train.sort();
    Ok(Split { train, test })
}

/// One held-out company.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub company: String,
    pub actual: f64,
    pub predicted: f64,
}

/// Scalar outcome of one evaluation; written as `metrics.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metrics {
    pub model: ModelKind,
    pub n_train: usize,
    pub n_test: usize,
    /// Mean absolute error in points on the 0-100 scale.
    pub mae: f64,
    /// Same number as `mae`, formatted as a percentage.
    pub mae_display: String,
    pub pearson_r: Option<f64>,
    pub p_value: Option<f64>,
    pub seed: u64,
    pub split_ratio: f64,
    pub excluded_companies: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub metrics: Metrics,
    pub pairs: Vec<Prediction>,
}

impl EvalReport {
    pub fn actual(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.actual).collect()
    }

    pub fn predicted(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.predicted).collect()
    }
}

pub fn format_mae(mae: f64) -> String {
    format!("{mae:.1}%")
}

/// Holdout split parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParams {
    pub test_fraction: f64,
    pub seed: u64,
}

/// Splits the rated companies, trains `hp` on the train side and scores the
/// test side. Companies without a rating are excluded with a warning.
pub fn evaluate(
    hp: &Hyperparams,
    features: &FeatureMatrix,
    ratings: &Ratings,
    params: SplitParams,
) -> Result<EvalReport, EvalError> {
    let mut warnings = Vec::new();
    let excluded: Vec<String> = features
        .companies
        .iter()
        .filter(|c| !ratings.contains_key(*c))
        .cloned()
        .collect();
    if !excluded.is_empty() {
        let msg = format!(
            "{} companies have no rating and were excluded",
            excluded.len()
        );
        log::warn!("{msg}: {}", excluded.join(", "));
        warnings.push(msg);
    }
    let rated: Vec<String> = features
        .companies
        .iter()
        .filter(|c| ratings.contains_key(*c))
        .cloned()
        .collect();
    if rated.is_empty() {
        return Err(EvalError::NoOverlap);
    }
    let sp = split(&rated, params.test_fraction, params.seed)?;

    let row_of: BTreeMap<&str, usize> = features
        .companies
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_str(), i))
        .collect();
    let gather = |names: &[String]| -> (Vec<Vec<f64>>, Vec<f64>) {
        names
            .iter()
            .map(|c| (features.values[row_of[c.as_str()]].clone(), ratings[c]))
            .unzip()
    };
    let (x_train, y_train) = gather(&sp.train);
    let (x_test, y_test) = gather(&sp.test);
    let model = models::train(&x_train, &y_train, hp, &features.feature_names)?;

    let mut pairs = Vec::with_capacity(sp.test.len());
    for ((company, x), actual) in sp.test.iter().zip(&x_test).zip(&y_test) {
        pairs.push(Prediction {
            company: company.clone(),
            actual: *actual,
            predicted: model.predict(x)?,
        });
    }
    let actual: Vec<f64> = pairs.iter().map(|p| p.actual).collect();
    let predicted: Vec<f64> = pairs.iter().map(|p| p.predicted).collect();
    let mae = stats::mae(&actual, &predicted)?;
    let (pearson, p) = match stats::pearson_r(&actual, &predicted) {
        Ok(r) => (Some(r), Some(stats::p_value(r, pairs.len())?)),
        Err(e) => {
            let msg = format!("correlation not reported: {e}");
            log::warn!("{msg}");
            warnings.push(msg);
            (None, None)
        }
    };
    Ok(EvalReport {
        metrics: Metrics {
            model: hp.kind(),
            n_train: sp.train.len(),
            n_test: pairs.len(),
            mae,
            mae_display: format_mae(mae),
            pearson_r: pearson,
            p_value: p,
            seed: params.seed,
            split_ratio: params.test_fraction,
            excluded_companies: excluded,
            warnings,
        },
        pairs,
    })
}
