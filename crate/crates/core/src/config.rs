//! Pipeline configuration file (JSON).
//!
//! Every field is optional and falls back to the defaults below. Unknown
//! keys are rejected. Relative paths resolve against the config file's
//! directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aggregate::FeatureLayout;
use crate::corpus::{CompanyProfile, KeywordTaxonomy, RatePolicy};
use crate::models::{
    BoostParams, ForestParams, Hyperparams, KnnParams, ModelKind, ModelParams, SvrParams,
};
use crate::sentiment::{Lexicon, LexiconError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

/// Per-kind model hyperparameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSettings {
    pub random_forest: ForestParams,
    pub gbt: BoostParams,
    pub knn: KnnParams,
    pub svr: SvrParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub taxonomy: KeywordTaxonomy,
    pub companies: Vec<CompanyProfile>,
    /// Valence table; the bundled seed lexicon when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lexicon: Option<PathBuf>,
    /// Minimum documents per (company, keyword) cell to keep a company.
    pub min_docs: usize,
    /// Documents requested per collection query.
    pub target_count: usize,
    pub rate_policy: RatePolicy,
    pub models: ModelSettings,
    pub split_fraction: f64,
    pub seed: u64,
    pub feature_layout: FeatureLayout,
    /// Scoring threads; 0 uses every core.
    pub workers: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            taxonomy: KeywordTaxonomy::default(),
            companies: Vec::new(),
            lexicon: None,
            min_docs: 5,
            target_count: 100,
            rate_policy: RatePolicy::default(),
            models: ModelSettings::default(),
            split_fraction: 0.2,
            seed: 42,
            feature_layout: FeatureLayout::default(),
            workers: 0,
        }
    }
}

impl PipelineConfig {
    /// Reads, resolves relative paths and validates a config file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: PipelineConfig =
            serde_json::from_str(&text).map_err(|source| ConfigError::Parse {
                path: path.to_path_buf(),
                source,
            })?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(lex) = &cfg.lexicon {
            if lex.is_relative() {
                cfg.lexicon = Some(base.join(lex));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(lex) = &self.lexicon {
            if !lex.is_file() {
                return Err(ConfigError::Invalid(format!(
                    "lexicon {} does not exist",
                    lex.display()
                )));
            }
        }
        if self.min_docs == 0 {
            return Err(ConfigError::Invalid("min_docs must be at least 1".into()));
        }
        if self.target_count == 0 {
            return Err(ConfigError::Invalid(
                "target_count must be at least 1".into(),
            ));
        }
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(ConfigError::Invalid(format!(
                "split_fraction {} not in (0, 1)",
                self.split_fraction
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.companies {
            if !seen.insert(&c.canonical_name) {
                return Err(ConfigError::Invalid(format!(
                    "duplicate company {:?}",
                    c.canonical_name
                )));
            }
        }
        for kind in ModelKind::ALL {
            self.hyperparams(kind, self.seed)
                .validate()
                .map_err(|e| ConfigError::Invalid(format!("{kind}: {e}")))?;
        }
        Ok(())
    }

    pub fn hyperparams(&self, kind: ModelKind, seed: u64) -> Hyperparams {
        let params = match kind {
            ModelKind::RandomForest => ModelParams::RandomForest(self.models.random_forest.clone()),
            ModelKind::Gbt => ModelParams::Gbt(self.models.gbt.clone()),
            ModelKind::Knn => ModelParams::Knn(self.models.knn.clone()),
            ModelKind::Svr => ModelParams::Svr(self.models.svr.clone()),
        };
        Hyperparams::new(params, seed)
    }

    pub fn lexicon(&self) -> Result<Lexicon, ConfigError> {
        match &self.lexicon {
            Some(p) => Ok(Lexicon::load(p)?),
            None => Ok(Lexicon::seed()),
        }
    }

    /// Profiles keyed by canonical name.
    pub fn profiles(&self) -> BTreeMap<String, CompanyProfile> {
        self.companies
            .iter()
            .map(|c| (c.canonical_name.clone(), c.clone()))
            .collect()
    }
}
