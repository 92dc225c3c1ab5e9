//! Synthetic corpus with a planted per-company signal.
//!
//! Each company gets a latent quality `q` in [-1, 1]. Every document about
//! it draws its sentiment words positive with probability `(1 + q) / 2`,
//! and its reference score is `50 + 40 q` plus bounded uniform noise. A
//! working pipeline should therefore recover `q` from the corpus alone.
//!
//! With `distractors` on, the corpus also carries documents the relevance
//! and scoring rules must drop: lowercase name mentions, blocklisted senses
//! of ambiguous names, and self-authored LinkedIn posts. Their sentiment is
//! the opposite of the planted signal, so letting them through hurts.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::PipelineConfig;
use crate::corpus::{
    save_corpus, CompanyProfile, CorpusError, Document, KeywordTaxonomy, Network, WIKIPEDIA,
};
use crate::eval::{ratings_csv, EvalError, Ratings};
use crate::io::write_atomic;

/// Sentiment vocabulary; every word is in the bundled lexicon.
pub const POSITIVE_WORDS: &[&str] = &[
    "excellent",
    "great",
    "outstanding",
    "successful",
    "innovative",
    "strong",
    "improved",
    "leading",
];
pub const NEGATIVE_WORDS: &[&str] = &[
    "terrible",
    "awful",
    "harmful",
    "toxic",
    "unethical",
    "scandal",
    "failed",
    "illegal",
];

const PREFIXES: &[&str] = &[
    "Northwind",
    "Bluecrest",
    "Halvard",
    "Corvane",
    "Tessaly",
    "Brightwell",
    "Quorra",
    "Marlow",
    "Ostrand",
    "Velmont",
    "Kestrel",
    "Arbeth",
    "Duskfield",
    "Elmsworth",
    "Pyralis",
    "Renwick",
];
const SUFFIXES: &[&str] = &[
    "Industries",
    "Holdings",
    "Systems",
    "Energy",
    "Foods",
    "Capital",
    "Labs",
];

/// Generator settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub n_companies: usize,
    /// Documents per (company, keyword) cell.
    pub docs_per_keyword: usize,
    /// Reference score noise is uniform in `[-rating_noise, rating_noise]`.
    pub rating_noise: f64,
    pub distractors: bool,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            n_companies: 100,
            docs_per_keyword: 6,
            rating_noise: 5.0,
            distractors: true,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDataset {
    pub profiles: Vec<CompanyProfile>,
    pub documents: Vec<Document>,
    pub ratings: Ratings,
    /// Planted quality per company.
    pub latent: BTreeMap<String, f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const CONFIG_FILE: &str = "config.json";
pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const RATINGS_FILE: &str = "ratings.csv";

impl SynthDataset {
    /// Writes `config.json`, `corpus.jsonl` and `ratings.csv` into `dir`.
    /// The config is `base` with the generated companies.
    pub fn write_to(&self, dir: impl AsRef<Path>, base: &PipelineConfig) -> Result<(), SynthError> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let config = PipelineConfig {
            companies: self.profiles.clone(),
            ..base.clone()
        };
        let mut json = serde_json::to_vec_pretty(&config)?;
        json.push(b'\n');
        write_atomic(dir.join(CONFIG_FILE), &json)?;
        save_corpus(dir.join(CORPUS_FILE), &self.documents)?;
        write_atomic(dir.join(RATINGS_FILE), &ratings_csv(&self.ratings)?)?;
        Ok(())
    }
}

fn company_name(i: usize) -> String {
    let p = PREFIXES[i % PREFIXES.len()];
    let s = SUFFIXES[(i / PREFIXES.len()) % SUFFIXES.len()];
    let round = i / (PREFIXES.len() * SUFFIXES.len());
    if round == 0 {
        format!("{p} {s}")
    } else {
        format!("{p} {s} {}", round + 1)
    }
}

fn slug(keyword: &str) -> String {
    keyword.replace(' ', "-")
}

fn words(rng: &mut ChaCha8Rng, q: f64, n: usize) -> Vec<&'static str> {
    (0..n)
        .map(|_| {
            let list = if rng.gen_bool((1.0 + q) / 2.0) {
                POSITIVE_WORDS
            } else {
                NEGATIVE_WORDS
            };
            *list.choose(rng).expect("nonempty word list")
        })
        .collect()
}

/// Builds the dataset; identical params give an identical dataset.
pub fn generate(params: &SynthParams, taxonomy: &KeywordTaxonomy) -> SynthDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let keywords: Vec<String> = taxonomy.keywords().map(str::to_string).collect();
    let mut profiles = Vec::new();
    let mut documents = Vec::new();
    let mut ratings = Ratings::new();
    let mut latent = BTreeMap::new();

    for i in 0..params.n_companies {
        let name = company_name(i);
        let short = name
            .split(' ')
            .next()
            .expect("name has a first word")
            .to_string();
        // every third company goes by an alias that is also an ordinary word
        let ambiguous = i % 3 == 0;
        let profile = CompanyProfile {
            canonical_name: name.clone(),
            aliases: if ambiguous {
                vec![short.clone()]
            } else {
                vec![]
            },
            ambiguous_aliases: if ambiguous {
                vec![short.clone()]
            } else {
                vec![]
            },
            sector: SUFFIXES[(i / PREFIXES.len()) % SUFFIXES.len()].to_lowercase(),
            blocklist_nouns: if ambiguous {
                vec!["trail".into(), "river".into()]
            } else {
                vec![]
            },
        };
        let q: f64 = rng.gen_range(-1.0..=1.0);
        let noise = if params.rating_noise > 0.0 {
            rng.gen_range(-params.rating_noise..=params.rating_noise)
        } else {
            0.0
        };
        ratings.insert(name.clone(), (50.0 + 40.0 * q + noise).clamp(0.0, 100.0));
        latent.insert(name.clone(), q);
        let mention = |rng: &mut ChaCha8Rng| -> String {
            if ambiguous && rng.gen_bool(0.5) {
                short.clone()
            } else {
                name.clone()
            }
        };

        for kw in &keywords {
            for j in 0..params.docs_per_keyword {
                let id = format!("{i:04}-{}-{j}", slug(kw));
                let w = words(&mut rng, q, 3);
                let who = mention(&mut rng);
                let doc = match j % 3 {
                    0 => Document::new(
                        id,
                        &name,
                        Network::Twitter,
                        kw,
                        format!("{who} {} record on {kw}, {} and {} says @watchdog https://t.co/x{i}{j}", w[0], w[1], w[2]),
                    ),
                    1 => {
                        let mut d = Document::new(
                            id,
                            &name,
                            Network::Linkedin,
                            kw,
                            format!("My take on {who} and {kw}: {} work, {} outcome, {} overall.", w[0], w[1], w[2]),
                        );
                        d.author_name = Some(format!("Analyst {j}"));
                        d.author_affiliation = Some("Independent Research".into());
                        d
                    }
                    _ => Document::new(
                        id,
                        &name,
                        Network::News,
                        kw,
                        format!(
                            "{who} published an update on {kw} this week. Observers called it {} and {}.\n\n\
                             Analysts found {name} {kw} data {}.\n\n\
                             Markets were mixed, with sentiment {} elsewhere in the sector.",
                            w[0],
                            w[1],
                            w[2],
                            words(&mut rng, -q, 1)[0]
                        ),
                    ),
                };
                documents.push(doc);
            }

            // occasionally route the content through a followed link
            if rng.gen_bool(0.25) {
                let w = words(&mut rng, q, 3);
                let mut d = Document::new(
                    format!("{i:04}-{}-link", slug(kw)),
                    &name,
                    Network::Twitter,
                    kw,
                    format!("{name} {kw} story https://example.org/{i}"),
                );
                d.link_url = Some(format!("https://example.org/{i}"));
                d.resolved_link_text = Some(format!(
                    "{name} reported on {kw}. The results were {} and {}, reviewers said the effort was {}.",
                    w[0], w[1], w[2]
                ));
                documents.push(d);
            }

            if params.distractors {
                let anti = words(&mut rng, -q, 3);
                let kind = rng.gen_range(0..3);
                let id = format!("{i:04}-{}-x", slug(kw));
                let doc = match kind {
                    0 => Document::new(
                        id,
                        &name,
                        Network::Twitter,
                        kw,
                        format!(
                            "{} {} {kw} {} {}",
                            name.to_lowercase(),
                            anti[0],
                            anti[1],
                            anti[2]
                        ),
                    ),
                    1 if ambiguous => Document::new(
                        id,
                        &name,
                        Network::Twitter,
                        kw,
                        format!(
                            "{short} trail cleanup for {kw} was {} and {}, {}",
                            anti[0], anti[1], anti[2]
                        ),
                    ),
                    _ => {
                        let mut d = Document::new(
                            id,
                            &name,
                            Network::Linkedin,
                            kw,
                            format!(
                                "Proud of {name} and our {kw} work: {} {} {}",
                                anti[0], anti[1], anti[2]
                            ),
                        );
                        d.author_name = Some("Staff Member".into());
                        d.author_affiliation = Some(name.clone());
                        d
                    }
                };
                documents.push(doc);
            }
        }

        let w = words(&mut rng, q, 2);
        documents.push(Document::new(
            format!("{i:04}-{WIKIPEDIA}"),
            &name,
            Network::Wikipedia,
            WIKIPEDIA,
            format!(
                "{name} is a company in the {} sector.\n\n{name} has a {} reputation and a {} history.",
                profile.sector, w[0], w[1]
            ),
        ));
        profiles.push(profile);
    }
    SynthDataset {
        profiles,
        documents,
        ratings,
        latent,
    }
}
