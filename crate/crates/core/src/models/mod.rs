//! Score regressors built from scratch: random forest, gradient-boosted
//! trees, k-nearest neighbours and a linear epsilon-insensitive SVR.
//!
//! Every model trains on a canonical row order (rows sorted by feature
//! values, then target), so shuffling the training set does not change the
//! result. Predictions are clamped to the 0-100 score range.

mod boost;
mod forest;
mod knn;
mod standardize;
mod svr;
pub mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use boost::{BoostParams, BoostedTrees};
pub use forest::{ForestParams, RandomForest};
pub use knn::{KnnParams, Neighbors, Weighting};
pub use standardize::Standardizer;
pub use svr::{LinearSvr, SvrParams};
pub use tree::{Node, RegressionTree, TreeParams};

pub const FORMAT_VERSION: u32 = 1;
pub const SCORE_MIN: f64 = 0.0;
pub const SCORE_MAX: f64 = 100.0;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("training data: {0}")]
    Data(String),
    #[error("hyperparameters: {0}")]
    Config(String),
    #[error("expected {expected} features, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("model file: {0}")]
    Load(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    RandomForest,
    Gbt,
    Knn,
    Svr,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::RandomForest,
        ModelKind::Gbt,
        ModelKind::Knn,
        ModelKind::Svr,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::RandomForest => "random_forest",
            ModelKind::Gbt => "gbt",
            ModelKind::Knn => "knn",
            ModelKind::Svr => "svr",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "rf" | "random_forest" | "random-forest" | "forest" => Ok(ModelKind::RandomForest),
            "gbt" | "xgboost" | "boost" | "gradient_boosting" => Ok(ModelKind::Gbt),
            "knn" | "k_nearest_neighbors" => Ok(ModelKind::Knn),
            "svr" | "svm" => Ok(ModelKind::Svr),
            other => Err(format!("unknown model kind {other:?} (rf, gbt, knn, svr)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelParams {
    RandomForest(ForestParams),
    Gbt(BoostParams),
    Knn(KnnParams),
    Svr(SvrParams),
}

impl ModelParams {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::RandomForest => ModelParams::RandomForest(ForestParams::default()),
            ModelKind::Gbt => ModelParams::Gbt(BoostParams::default()),
            ModelKind::Knn => ModelParams::Knn(KnnParams::default()),
            ModelKind::Svr => ModelParams::Svr(SvrParams::default()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::RandomForest(_) => ModelKind::RandomForest,
            ModelParams::Gbt(_) => ModelKind::Gbt,
            ModelParams::Knn(_) => ModelKind::Knn,
            ModelParams::Svr(_) => ModelKind::Svr,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hyperparams {
    pub model: ModelParams,
    pub seed: u64,
}

impl Hyperparams {
    pub fn new(model: ModelParams, seed: u64) -> Self {
        Hyperparams { model, seed }
    }

    pub fn defaults(kind: ModelKind, seed: u64) -> Self {
        Hyperparams::new(ModelParams::default_for(kind), seed)
    }

    pub fn kind(&self) -> ModelKind {
        self.model.kind()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let bad = |m: &str| Err(ModelError::Config(m.to_string()));
        match &self.model {
            ModelParams::RandomForest(p) => {
                if p.n_trees == 0 || p.min_samples_leaf == 0 {
                    return bad("n_trees and min_samples_leaf must be at least 1");
                }
                if p.features_per_split == Some(0) || p.max_depth == Some(0) {
                    return bad("features_per_split and max_depth must be at least 1");
                }
            }
            ModelParams::Gbt(p) => {
                if p.n_stages == 0 || p.min_samples_leaf == 0 || p.max_depth == Some(0) {
                    return bad("n_stages, min_samples_leaf and max_depth must be at least 1");
                }
                if !(p.shrinkage > 0.0 && p.shrinkage <= 1.0) {
                    return bad("shrinkage must lie in (0, 1]");
                }
            }
            ModelParams::Knn(p) => {
                if p.k == 0 {
                    return bad("k must be at least 1");
                }
            }
            ModelParams::Svr(p) => {
                if !(p.epsilon >= 0.0 && p.epsilon.is_finite()) {
                    return bad("epsilon must be non-negative");
                }
                if !(p.l2_lambda > 0.0 && p.l2_lambda.is_finite()) {
                    return bad("l2_lambda must be positive");
                }
                if p.epochs == 0 {
                    return bad("epochs must be at least 1");
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LearnedModel {
    Forest(RandomForest),
    Boosted(BoostedTrees),
    Neighbors(Neighbors),
    Linear(LinearSvr),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainingMetadata {
    pub seed: u64,
    pub feature_names: Vec<String>,
    pub n_train: usize,
}

/// A trained regressor with everything needed to predict and to re-save it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelArtifact {
    pub format_version: u32,
    pub kind: ModelKind,
    pub hyperparams: Hyperparams,
    /// Present for knn and svr.
    pub standardization: Option<Standardizer>,
    pub model: LearnedModel,
    pub metadata: TrainingMetadata,
}

/// Row indices sorted by (features, target) under `total_cmp`.
fn canonical_order(x: &[Vec<f64>], y: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..y.len()).collect();
    idx.sort_by(|&a, &b| {
        x[a].iter()
            .zip(&x[b])
            .map(|(u, v)| u.total_cmp(v))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y[a].total_cmp(&y[b]))
    });
    idx
}

fn check_training_data(
    x: &[Vec<f64>],
    y: &[f64],
    feature_names: &[String],
) -> Result<(), ModelError> {
    if x.len() != y.len() {
        return Err(ModelError::Data(format!(
            "{} rows but {} targets",
            x.len(),
            y.len()
        )));
    }
    if y.len() < 2 {
        return Err(ModelError::Data(format!(
            "need at least 2 rows, got {}",
            y.len()
        )));
    }
    let p = feature_names.len();
    if let Some(i) = x.iter().position(|r| r.len() != p) {
        return Err(ModelError::Data(format!(
            "row {i} has {} features, expected {p}",
            x[i].len()
        )));
    }
    if x.iter().flatten().any(|v| !v.is_finite()) {
        return Err(ModelError::Data(
            "feature matrix has missing or non-finite cells".into(),
        ));
    }
    if let Some(t) = y.iter().find(|t| !(SCORE_MIN..=SCORE_MAX).contains(*t)) {
        return Err(ModelError::Data(format!("target {t} outside [0, 100]")));
    }
    Ok(())
}

/// Fits the model selected by `hp` on rows `x` with targets `y` in [0, 100].
pub fn train(
    x: &[Vec<f64>],
    y: &[f64],
    hp: &Hyperparams,
    feature_names: &[String],
) -> Result<ModelArtifact, ModelError> {
    hp.validate()?;
    check_training_data(x, y, feature_names)?;
    let order = canonical_order(x, y);
    let x: Vec<Vec<f64>> = order.iter().map(|&i| x[i].clone()).collect();
    let y: Vec<f64> = order.iter().map(|&i| y[i]).collect();
    let n = y.len();

    let (standardization, model) = match &hp.model {
        ModelParams::RandomForest(p) => (
            None,
            LearnedModel::Forest(RandomForest::fit(&x, &y, p, hp.seed)),
        ),
        ModelParams::Gbt(p) => (None, LearnedModel::Boosted(BoostedTrees::fit(&x, &y, p))),
        ModelParams::Knn(p) => {
            if p.k > n {
                return Err(ModelError::Config(format!(
                    "k = {} exceeds {n} training rows",
                    p.k
                )));
            }
            let scaler = Standardizer::fit(&x);
            let model = Neighbors {
                k: p.k,
                weighting: p.weighting,
                x,
                y,
            };
            (Some(scaler), LearnedModel::Neighbors(model))
        }
        ModelParams::Svr(p) => {
            let scaler = Standardizer::fit(&x);
            let z = scaler.transform_all(&x);
            let (svr, _) = LinearSvr::fit(&z, &y, p);
            (Some(scaler), LearnedModel::Linear(svr))
        }
    };
    Ok(ModelArtifact {
        format_version: FORMAT_VERSION,
        kind: hp.kind(),
        hyperparams: hp.clone(),
        standardization,
        model,
        metadata: TrainingMetadata {
            seed: hp.seed,
            feature_names: feature_names.to_vec(),
            n_train: n,
        },
    })
}

impl ModelArtifact {
    pub fn n_features(&self) -> usize {
        self.metadata.feature_names.len()
    }

    /// Model output before clamping.
    pub fn predict_raw(&self, x: &[f64]) -> Result<f64, ModelError> {
        if x.len() != self.n_features() {
            return Err(ModelError::Dimension {
                expected: self.n_features(),
                got: x.len(),
            });
        }
        let scaler = || {
            self.standardization
                .as_ref()
                .expect("validated artifact carries standardization")
        };
        Ok(match &self.model {
            LearnedModel::Forest(f) => f.predict(x),
            LearnedModel::Boosted(b) => b.predict(x),
            LearnedModel::Neighbors(k) => k.predict(scaler(), x),
            LearnedModel::Linear(s) => s.predict(&scaler().transform(x)),
        })
    }

    /// Score in [0, 100].
    pub fn predict(&self, x: &[f64]) -> Result<f64, ModelError> {
        Ok(clamp_score(self.predict_raw(x)?))
    }

    pub fn to_json(&self) -> Vec<u8> {
        let mut out = serde_json::to_vec_pretty(self).expect("artifact serializes");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, ModelError> {
        let value: serde_json::Value =
            serde_json::from_slice(bytes).map_err(|e| ModelError::Load(e.to_string()))?;
        match value.get("format_version").and_then(|v| v.as_u64()) {
            Some(v) if v == FORMAT_VERSION as u64 => {}
            Some(v) => {
                return Err(ModelError::Load(format!(
                    "format_version {v} is not supported (expected {FORMAT_VERSION})"
                )))
            }
            None => return Err(ModelError::Load("missing format_version".into())),
        }
        let artifact: ModelArtifact =
            serde_json::from_value(value).map_err(|e| ModelError::Load(e.to_string()))?;
        artifact.validate()?;
        Ok(artifact)
    }

    /// Structural checks run on every loaded artifact.
    pub fn validate(&self) -> Result<(), ModelError> {
        let load = |m: String| Err(ModelError::Load(m));
        let p = self.n_features();
        if self.kind != self.hyperparams.kind() {
            return load(format!("kind {} disagrees with hyperparameters", self.kind));
        }
        self.hyperparams
            .validate()
            .map_err(|e| ModelError::Load(e.to_string()))?;
        let needs_scaler = matches!(self.kind, ModelKind::Knn | ModelKind::Svr);
        match &self.standardization {
            Some(_) if !needs_scaler => {
                return load(format!("{} carries standardization", self.kind))
            }
            Some(s) if s.mean.len() != p || s.sd.len() != p => {
                return load("standardization length mismatch".into())
            }
            None if needs_scaler => return load(format!("{} needs standardization", self.kind)),
            _ => {}
        }
        let trees = match (&self.model, self.kind) {
            (LearnedModel::Forest(f), ModelKind::RandomForest) => {
                if f.trees.is_empty() {
                    return load("forest has no trees".into());
                }
                f.trees.iter().collect::<Vec<_>>()
            }
            (LearnedModel::Boosted(b), ModelKind::Gbt) => {
                if !b.init.is_finite() || !(b.shrinkage > 0.0 && b.shrinkage <= 1.0) {
                    return load("bad boosting constants".into());
                }
                b.stages.iter().collect()
            }
            (LearnedModel::Neighbors(k), ModelKind::Knn) => {
                if k.x.len() != k.y.len() || k.k == 0 || k.k > k.y.len() {
                    return load("neighbour table is inconsistent".into());
                }
                if k.x.iter().any(|r| r.len() != p) {
                    return load("neighbour row length mismatch".into());
                }
                Vec::new()
            }
            (LearnedModel::Linear(s), ModelKind::Svr) => {
                if s.weights.len() != p {
                    return load("weight vector length mismatch".into());
                }
                Vec::new()
            }
            _ => {
                return load(format!(
                    "learned structure does not match kind {}",
                    self.kind
                ))
            }
        };
        for (i, t) in trees.into_iter().enumerate() {
            t.validate(p)
                .map_err(|e| ModelError::Load(format!("tree {i}: {e}")))?;
        }
        Ok(())
    }
}

pub fn clamp_score(raw: f64) -> f64 {
    raw.clamp(SCORE_MIN, SCORE_MAX)
}
