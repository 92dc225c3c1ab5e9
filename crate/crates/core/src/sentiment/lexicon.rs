use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use thiserror::Error;

/// `alpha` in the squashing map `s / sqrt(s^2 + alpha)`.
pub const NORMALIZATION_ALPHA: f64 = 15.0;
/// Multiplier applied to a valence preceded by a negator.
pub const NEGATION_SCALAR: f64 = -0.75;
/// How many preceding tokens are searched for a negator.
pub const NEGATION_WINDOW: usize = 3;

const SEED_LEXICON: &str = include_str!("../../data/lexicon.tsv");

const DEFAULT_NEGATORS: &[&str] = &[
    "not",
    "no",
    "never",
    "neither",
    "nor",
    "none",
    "nobody",
    "nothing",
    "without",
    "cannot",
    "can't",
    "don't",
    "doesn't",
    "didn't",
    "isn't",
    "wasn't",
    "aren't",
    "weren't",
    "won't",
    "wouldn't",
    "shouldn't",
    "hardly",
    "lack",
    "lacks",
    "lacking",
];

const DEFAULT_INTENSIFIERS: &[(&str, f64)] = &[
    ("very", 0.3),
    ("extremely", 0.5),
    ("highly", 0.3),
    ("really", 0.2),
    ("incredibly", 0.4),
    ("deeply", 0.3),
    ("truly", 0.2),
    ("so", 0.15),
    ("most", 0.3),
    ("slightly", -0.3),
    ("somewhat", -0.2),
    ("barely", -0.4),
    ("marginally", -0.3),
    ("partly", -0.2),
];

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("lexicon line {line}: {reason}")]
    Line { line: usize, reason: String },
    #[error("valence of {token:?} is {value}, outside [-1, 1]")]
    ValenceRange { token: String, value: f64 },
    #[error("intensifier delta of {token:?} is {value}, outside [-0.5, 0.5]")]
    IntensifierRange { token: String, value: f64 },
    #[error("{0:?} is both a negator and a valenced token")]
    NegatorHasValence(String),
}

/// Polarity of a token sequence together with the number of tokens that
/// carried a valence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TokenScore {
    pub polarity: f64,
    pub valenced_token_count: usize,
    pub raw_sum: f64,
}

/// Anything that maps lowercase tokens to a polarity in (-1, 1).
pub trait SentimentScorer: Send + Sync {
    fn score_tokens(&self, tokens: &[String]) -> TokenScore;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lexicon {
    valences: BTreeMap<String, f64>,
    negators: BTreeSet<String>,
    intensifiers: BTreeMap<String, f64>,
}

impl Lexicon {
    pub fn new(
        valences: BTreeMap<String, f64>,
        negators: BTreeSet<String>,
        intensifiers: BTreeMap<String, f64>,
    ) -> Result<Self, LexiconError> {
        for (token, &value) in &valences {
            if !(-1.0..=1.0).contains(&value) {
                return Err(LexiconError::ValenceRange {
                    token: token.clone(),
                    value,
                });
            }
        }
        for (token, &value) in &intensifiers {
            if !(-0.5..=0.5).contains(&value) {
                return Err(LexiconError::IntensifierRange {
                    token: token.clone(),
                    value,
                });
            }
        }
        if let Some(n) = negators.iter().find(|n| valences.contains_key(*n)) {
            return Err(LexiconError::NegatorHasValence(n.clone()));
        }
        Ok(Lexicon {
            valences,
            negators,
            intensifiers,
        })
    }

    /// Valences from `token<TAB>float` lines with the built-in negators and
    /// intensifiers.
    pub fn from_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut valences = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            if raw.trim().is_empty() || raw.starts_with('#') {
                continue;
            }
            let (token, value) = raw.split_once('\t').ok_or_else(|| LexiconError::Line {
                line,
                reason: "expected token<TAB>valence".into(),
            })?;
            let token = token.trim();
            if token.is_empty() || token.chars().any(|c| c.is_uppercase() || c.is_whitespace()) {
                return Err(LexiconError::Line {
                    line,
                    reason: format!("token {token:?} must be one lowercase word"),
                });
            }
            let value: f64 = value.trim().parse().map_err(|_| LexiconError::Line {
                line,
                reason: format!("bad valence {:?}", value.trim()),
            })?;
            if valences.insert(token.to_string(), value).is_some() {
                return Err(LexiconError::Line {
                    line,
                    reason: format!("duplicate token {token:?}"),
                });
            }
        }
        Lexicon::new(
            valences,
            DEFAULT_NEGATORS.iter().map(|s| s.to_string()).collect(),
            DEFAULT_INTENSIFIERS
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        Lexicon::from_tsv(&fs::read_to_string(path)?)
    }

    /// The bundled seed lexicon.
    pub fn seed() -> Self {
        Lexicon::from_tsv(SEED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn valence(&self, token: &str) -> Option<f64> {
        self.valences.get(token).copied()
    }

    pub fn is_negator(&self, token: &str) -> bool {
        self.negators.contains(token)
    }

    pub fn intensifier(&self, token: &str) -> Option<f64> {
        self.intensifiers.get(token).copied()
    }

    pub fn len(&self) -> usize {
        self.valences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valences.is_empty()
    }

    pub fn valences(&self) -> impl Iterator<Item = (&str, f64)> {
        self.valences.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl SentimentScorer for Lexicon {
    /// Each valenced token contributes
    /// `valence * (1 + delta of the previous token if it intensifies)`,
    /// scaled by `-0.75` when a negator sits in the three tokens before it.
    /// The sum `s` maps to `s / sqrt(s^2 + 15)`.
    fn score_tokens(&self, tokens: &[String]) -> TokenScore {
        let mut sum = 0.0;
        let mut count = 0;
        for (i, token) in tokens.iter().enumerate() {
            let Some(valence) = self.valence(token) else {
                continue;
            };
            count += 1;
            let mut adjusted = valence;
            if let Some(delta) = i.checked_sub(1).and_then(|p| self.intensifier(&tokens[p])) {
                adjusted *= 1.0 + delta;
            }
            let window = &tokens[i.saturating_sub(NEGATION_WINDOW)..i];
            if window.iter().any(|t| self.is_negator(t)) {
                adjusted *= NEGATION_SCALAR;
            }
            sum += adjusted;
        }
        let polarity = if count == 0 {
            0.0
        } else {
            sum / (sum * sum + NORMALIZATION_ALPHA).sqrt()
        };
        TokenScore {
            polarity,
            valenced_token_count: count,
            raw_sum: sum,
        }
    }
}
