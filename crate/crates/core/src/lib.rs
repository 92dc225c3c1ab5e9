//! Social-text ESG scoring pipeline.
//!
//! Documents about companies are cleaned, filtered for company and ESG
//! relevance, scored with a lexicon sentiment engine, pooled into one
//! feature per ESG keyword, and fed to regressors that predict a 0-100
//! score calibrated against reference ratings.
//!
//! Stage map:
//!
//! * [`corpus`] - document model, keyword taxonomy, connectors and backoff
//! * [`preprocess`] - text cleaning, paragraphs, tokens
//! * [`relevance`] - company mention and keyword detection
//! * [`sentiment`] - lexicon scoring, short/long modes, batch scoring
//! * [`aggregate`] - per-keyword means, coverage gate, imputation
//! * [`models`] - random forest, gradient boosting, knn, linear SVR
//! * [`eval`] - split, MAE, Pearson r, p-values, report files
//! * [`config`] - pipeline configuration file
//! * [`synth`] - planted-signal synthetic corpus generator

pub mod aggregate;
pub mod config;
pub mod corpus;
pub mod eval;
pub mod io;
pub mod models;
pub mod preprocess;
pub mod relevance;
pub mod sentiment;
pub mod synth;

pub use aggregate::FeatureMatrix;
pub use config::PipelineConfig;
pub use corpus::{CompanyProfile, Document, KeywordTaxonomy, Network};
pub use models::{Hyperparams, ModelArtifact, ModelKind};
pub use sentiment::{Lexicon, SentimentResult};
