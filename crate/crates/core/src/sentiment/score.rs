use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::lexicon::SentimentScorer;
use crate::corpus::{CompanyProfile, Document, KeywordTaxonomy, Network};
use crate::preprocess::{clean_text, split_paragraphs, tokenize};
use crate::relevance::{entity_mention, is_relevant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScoreMode {
    ShortPost,
    LongArticle,
    ExcludedSelfReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentResult {
    pub relevant: bool,
    pub polarity: f64,
    pub valenced_token_count: usize,
    pub mode: ScoreMode,
}

impl SentimentResult {
    fn irrelevant(mode: ScoreMode) -> Self {
        SentimentResult {
            relevant: false,
            polarity: 0.0,
            valenced_token_count: 0,
            mode,
        }
    }

    /// Whether the result feeds the per-keyword means.
    pub fn counts(&self) -> bool {
        self.relevant && self.mode != ScoreMode::ExcludedSelfReport
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("document {id}: {network} is not a short-post network")]
    NotShortForm { id: String, network: Network },
    #[error("document {id} is not relevant to {company}")]
    NotRelevant { id: String, company: String },
    #[error("document {id}: no profile for company {company:?}")]
    UnknownCompany { id: String, company: String },
}

/// Scores a tweet or LinkedIn post that already passed the relevance check.
/// A post carrying both a link and the fetched link body is scored as that
/// article instead.
pub fn score_short_post<S: SentimentScorer + ?Sized>(
    doc: &Document,
    scorer: &S,
    profile: &CompanyProfile,
    taxonomy: &KeywordTaxonomy,
) -> Result<SentimentResult, ScoreError> {
    if !doc.network.is_short_form() {
        return Err(ScoreError::NotShortForm {
            id: doc.id.clone(),
            network: doc.network,
        });
    }
    if !is_relevant(doc, profile, taxonomy).relevant {
        return Err(ScoreError::NotRelevant {
            id: doc.id.clone(),
            company: profile.canonical_name.clone(),
        });
    }
    Ok(short_post_unchecked(doc, scorer, profile))
}

fn short_post_unchecked<S: SentimentScorer + ?Sized>(
    doc: &Document,
    scorer: &S,
    profile: &CompanyProfile,
) -> SentimentResult {
    if let (Some(_), Some(linked)) = (&doc.link_url, &doc.resolved_link_text) {
        if !linked.trim().is_empty() {
            return score_long_article(linked, scorer, profile);
        }
    }
    let s = scorer.score_tokens(&tokenize(&clean_text(&doc.text).cleaned));
    SentimentResult {
        relevant: true,
        polarity: s.polarity,
        valenced_token_count: s.valenced_token_count,
        mode: ScoreMode::ShortPost,
    }
}

/// Mean paragraph polarity over the paragraphs that mention the company.
pub fn score_long_article<S: SentimentScorer + ?Sized>(
    text: &str,
    scorer: &S,
    profile: &CompanyProfile,
) -> SentimentResult {
    let mut total = 0.0;
    let mut paragraphs = 0usize;
    let mut valenced = 0usize;
    for paragraph in split_paragraphs(text) {
        let cleaned = clean_text(&paragraph).cleaned;
        if !entity_mention(&cleaned, profile).mentioned {
            continue;
        }
        let s = scorer.score_tokens(&tokenize(&cleaned));
        total += s.polarity;
        valenced += s.valenced_token_count;
        paragraphs += 1;
    }
    if paragraphs == 0 {
        return SentimentResult::irrelevant(ScoreMode::LongArticle);
    }
    SentimentResult {
        relevant: true,
        polarity: total / paragraphs as f64,
        valenced_token_count: valenced,
        mode: ScoreMode::LongArticle,
    }
}

fn is_self_report(doc: &Document, profile: &CompanyProfile) -> bool {
    if doc.network != Network::Linkedin {
        return false;
    }
    let Some(affiliation) = doc.author_affiliation.as_deref() else {
        return false;
    };
    let affiliation = affiliation.to_lowercase();
    let words: Vec<String> = tokenize(&affiliation);
    profile.names().into_iter().any(|name| {
        let name_words = tokenize(name);
        !name_words.is_empty()
            && words
                .windows(name_words.len())
                .any(|w| w == name_words.as_slice())
    })
}

/// Routes a document to its scoring mode. LinkedIn posts written by the
/// company's own people are excluded; twitter and linkedin are short posts;
/// news and wikipedia are long articles.
pub fn score_document<S: SentimentScorer + ?Sized>(
    doc: &Document,
    scorer: &S,
    profile: &CompanyProfile,
    taxonomy: &KeywordTaxonomy,
) -> SentimentResult {
    if is_self_report(doc, profile) {
        return SentimentResult::irrelevant(ScoreMode::ExcludedSelfReport);
    }
    let mode = if doc.network.is_short_form() {
        ScoreMode::ShortPost
    } else {
        ScoreMode::LongArticle
    };
    if !is_relevant(doc, profile, taxonomy).relevant {
        return SentimentResult::irrelevant(mode);
    }
    match mode {
        ScoreMode::ShortPost => short_post_unchecked(doc, scorer, profile),
        _ => score_long_article(&doc.text, scorer, profile),
    }
}

/// A document id and its keys alongside the sentiment result; one line of
/// the scored JSONL file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredDocument {
    pub id: String,
    pub company: String,
    pub network: Network,
    pub keyword: String,
    #[serde(flatten)]
    pub result: SentimentResult,
}

#[derive(Debug, Error)]
#[error("{} documents failed to score; first: {}", failures.len(), failures.first().map(|f| f.to_string()).unwrap_or_default())]
pub struct BatchError {
    pub failures: Vec<ScoreError>,
}

/// Scores every document on a pool of `workers` threads (0 = rayon default).
/// Output order follows input order and never depends on the worker count.
pub fn score_batch<S: SentimentScorer + ?Sized>(
    docs: &[Document],
    scorer: &S,
    profiles: &BTreeMap<String, CompanyProfile>,
    taxonomy: &KeywordTaxonomy,
    workers: usize,
) -> Result<Vec<ScoredDocument>, BatchError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    let results: Vec<Result<ScoredDocument, ScoreError>> = pool.install(|| {
        docs.par_iter()
            .map(|doc| {
                let profile =
                    profiles
                        .get(&doc.company)
                        .ok_or_else(|| ScoreError::UnknownCompany {
                            id: doc.id.clone(),
                            company: doc.company.clone(),
                        })?;
                Ok(ScoredDocument {
                    id: doc.id.clone(),
                    company: doc.company.clone(),
                    network: doc.network,
                    keyword: doc.keyword.clone(),
                    result: score_document(doc, scorer, profile, taxonomy),
                })
            })
            .collect()
    });
    let mut scored = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(s) => scored.push(s),
            Err(e) => failures.push(e),
        }
    }
    if failures.is_empty() {
        Ok(scored)
    } else {
        Err(BatchError { failures })
    }
}

pub fn parse_scored<R: BufRead>(
    reader: R,
) -> Result<Vec<ScoredDocument>, crate::corpus::CorpusError> {
    use crate::corpus::CorpusError;
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ScoredDocument =
            serde_json::from_str(&line).map_err(|source| CorpusError::Parse {
                line: idx + 1,
                source,
            })?;
        if !(rec.result.polarity > -1.0 && rec.result.polarity < 1.0) {
            return Err(CorpusError::Invalid {
                line: idx + 1,
                reason: format!("polarity {} outside (-1, 1)", rec.result.polarity),
            });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn load_scored(
    path: impl AsRef<Path>,
) -> Result<Vec<ScoredDocument>, crate::corpus::CorpusError> {
    parse_scored(BufReader::new(File::open(path)?))
}

pub fn save_scored(path: impl AsRef<Path>, scored: &[ScoredDocument]) -> io::Result<()> {
    let mut buf = Vec::new();
    for s in scored {
        serde_json::to_writer(&mut buf, s)?;
        buf.write_all(b"\n")?;
    }
    crate::io::write_atomic(path, &buf)
}
