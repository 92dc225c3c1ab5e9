//! Lexicon sentiment scoring of relevant documents.

mod lexicon;
mod score;

pub use lexicon::{Lexicon, LexiconError, SentimentScorer, TokenScore, NORMALIZATION_ALPHA};
pub use score::{
    load_scored, parse_scored, save_scored, score_batch, score_document, score_long_article,
    score_short_post, BatchError, ScoreError, ScoreMode, ScoredDocument, SentimentResult,
};
