//! Connector interface and the quota/backoff loop that drives it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::document::{Document, Network};
use super::profile::CompanyProfile;
use super::taxonomy::{KeywordTaxonomy, TaxonomyError, WIKIPEDIA};

/// A search issued to one network.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Query {
    pub network: Network,
    pub text: String,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:?}", self.network, self.text)
    }
}

/// `"<company> <keyword>"` on every keyword network for each keyword in
/// taxonomy order, then a single `"<company>"` wikipedia lookup.
pub fn build_queries(
    company: &CompanyProfile,
    taxonomy: &KeywordTaxonomy,
) -> Result<Vec<Query>, TaxonomyError> {
    if taxonomy.is_empty() {
        return Err(TaxonomyError::Empty);
    }
    let name = &company.canonical_name;
    let mut out = Vec::with_capacity(taxonomy.len() * Network::KEYWORD_NETWORKS.len() + 1);
    for kw in taxonomy.keywords() {
        for network in Network::KEYWORD_NETWORKS {
            out.push(Query {
                network,
                text: format!("{name} {kw}"),
            });
        }
    }
    out.push(Query {
        network: Network::Wikipedia,
        text: name.clone(),
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRatePolicy", into = "RawRatePolicy")]
pub struct RatePolicy {
    pub base_delay: Duration,
    pub max_delay: Duration,
    pub multiplier: f64,
    pub max_retries: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRatePolicy {
    #[serde(default = "default_base_ms")]
    base_delay_ms: u64,
    #[serde(default = "default_max_ms")]
    max_delay_ms: u64,
    #[serde(default = "default_multiplier")]
    multiplier: f64,
    #[serde(default = "default_retries")]
    max_retries: u32,
}

fn default_base_ms() -> u64 {
    1_000
}
fn default_max_ms() -> u64 {
    60_000
}
fn default_multiplier() -> f64 {
    2.0
}
fn default_retries() -> u32 {
    5
}

impl TryFrom<RawRatePolicy> for RatePolicy {
    type Error = String;

    fn try_from(raw: RawRatePolicy) -> Result<Self, String> {
        RatePolicy::new(
            Duration::from_millis(raw.base_delay_ms),
            Duration::from_millis(raw.max_delay_ms),
            raw.multiplier,
            raw.max_retries,
        )
    }
}

impl From<RatePolicy> for RawRatePolicy {
    fn from(p: RatePolicy) -> Self {
        RawRatePolicy {
            base_delay_ms: p.base_delay.as_millis() as u64,
            max_delay_ms: p.max_delay.as_millis() as u64,
            multiplier: p.multiplier,
            max_retries: p.max_retries,
        }
    }
}

impl Default for RatePolicy {
    fn default() -> Self {
        RatePolicy {
            base_delay: Duration::from_millis(default_base_ms()),
            max_delay: Duration::from_millis(default_max_ms()),
            multiplier: default_multiplier(),
            max_retries: default_retries(),
        }
    }
}

impl RatePolicy {
    pub fn new(
        base_delay: Duration,
        max_delay: Duration,
        multiplier: f64,
        max_retries: u32,
    ) -> Result<Self, String> {
        if base_delay > max_delay {
            return Err(format!(
                "base delay {base_delay:?} exceeds max delay {max_delay:?}"
            ));
        }
        if !(multiplier.is_finite() && multiplier > 1.0) {
            return Err(format!("backoff multiplier must be > 1, got {multiplier}"));
        }
        Ok(RatePolicy {
            base_delay,
            max_delay,
            multiplier,
            max_retries,
        })
    }

    /// Sleep before retry `k` (0-based): `min(base * multiplier^k, max)`.
    pub fn delay(&self, k: u32) -> Duration {
        let secs = self.base_delay.as_secs_f64() * self.multiplier.powi(k as i32);
        if !secs.is_finite() || secs >= self.max_delay.as_secs_f64() {
            self.max_delay
        } else {
            Duration::from_secs_f64(secs).min(self.max_delay)
        }
    }
}

/// Clock abstraction so backoff can be observed in tests.
pub trait Sleeper {
    fn sleep(&mut self, d: Duration);
}

#[derive(Debug, Default, Clone, Copy)]
pub struct ThreadSleeper;

impl Sleeper for ThreadSleeper {
    fn sleep(&mut self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Records requested sleeps instead of sleeping.
#[derive(Debug, Default, Clone)]
pub struct RecordingSleeper {
    pub log: Vec<Duration>,
}

impl Sleeper for RecordingSleeper {
    fn sleep(&mut self, d: Duration) {
        self.log.push(d);
    }
}

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("source {source_name}: {message}")]
    Io {
        source_name: String,
        message: String,
    },
}

/// Result of one adapter call.
#[derive(Debug, Clone, PartialEq)]
pub enum FetchOutcome {
    /// Up to the requested number of new documents.
    Items(Vec<Document>),
    /// The source asked us to slow down; nothing was returned.
    RateLimited,
    /// No more results for this query.
    Exhausted,
}

/// A provider of documents for queries on one or more networks.
///
/// Adapters keep their own paging cursor per query; repeated calls for the
/// same query return successive pages.
pub trait SourceAdapter {
    fn name(&self) -> &str;
    fn fetch(&mut self, query: &Query, max_items: usize) -> Result<FetchOutcome, SourceError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shortfall {
    pub wanted: usize,
    pub got: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Collection {
    pub documents: Vec<Document>,
    pub shortfall: Option<Shortfall>,
    pub adapter_calls: usize,
}

#[derive(Debug, Error)]
pub enum CollectError {
    #[error("target count must be at least 1")]
    InvalidTarget,
    #[error("{query}: rate limited after {retries} retries ({} documents gathered)", partial.len())]
    RetriesExhausted {
        query: String,
        retries: u32,
        partial: Vec<Document>,
    },
    #[error(transparent)]
    Source(#[from] SourceError),
}

/// Gathers up to `target_count` documents for `query`, backing off on
/// rate-limit signals. The retry budget is shared across the whole call and
/// the backoff exponent never resets, so the sleep sequence is monotone.
pub fn collect<A, S>(
    adapter: &mut A,
    query: &Query,
    target_count: usize,
    policy: &RatePolicy,
    sleeper: &mut S,
) -> Result<Collection, CollectError>
where
    A: SourceAdapter + ?Sized,
    S: Sleeper + ?Sized,
{
    if target_count == 0 {
        return Err(CollectError::InvalidTarget);
    }
    let mut documents: Vec<Document> = Vec::with_capacity(target_count);
    let mut retries = 0u32;
    let mut calls = 0usize;
    while documents.len() < target_count {
        calls += 1;
        match adapter.fetch(query, target_count - documents.len())? {
            FetchOutcome::Items(items) if !items.is_empty() => {
                let room = target_count - documents.len();
                documents.extend(items.into_iter().take(room));
            }
            FetchOutcome::Items(_) | FetchOutcome::Exhausted => break,
            FetchOutcome::RateLimited => {
                if retries >= policy.max_retries {
                    return Err(CollectError::RetriesExhausted {
                        query: query.to_string(),
                        retries,
                        partial: documents,
                    });
                }
                let delay = policy.delay(retries);
                log::debug!(
                    "{}: rate limited on {query}, sleeping {delay:?}",
                    adapter.name()
                );
                sleeper.sleep(delay);
                retries += 1;
            }
        }
    }
    let shortfall = (documents.len() < target_count).then(|| Shortfall {
        wanted: target_count,
        got: documents.len(),
    });
    if let Some(s) = shortfall {
        log::warn!(
            "{}: {query} returned {} of {} requested documents",
            adapter.name(),
            s.got,
            s.wanted
        );
    }
    Ok(Collection {
        documents,
        shortfall,
        adapter_calls: calls,
    })
}

/// Serves pre-recorded documents, paging through those whose company,
/// network and keyword reproduce the query string.
#[derive(Debug, Clone)]
pub struct FixtureAdapter {
    name: String,
    pages: BTreeMap<Query, Vec<Document>>,
    cursors: BTreeMap<Query, usize>,
    page_size: usize,
    rate_limited_calls: BTreeSet<usize>,
    calls: usize,
}

impl FixtureAdapter {
    pub fn new(name: impl Into<String>, docs: impl IntoIterator<Item = Document>) -> Self {
        let mut pages: BTreeMap<Query, Vec<Document>> = BTreeMap::new();
        for doc in docs {
            let text = if doc.network == Network::Wikipedia || doc.keyword == WIKIPEDIA {
                doc.company.clone()
            } else {
                format!("{} {}", doc.company, doc.keyword)
            };
            pages
                .entry(Query {
                    network: doc.network,
                    text,
                })
                .or_default()
                .push(doc);
        }
        FixtureAdapter {
            name: name.into(),
            pages,
            cursors: BTreeMap::new(),
            page_size: usize::MAX,
            rate_limited_calls: BTreeSet::new(),
            calls: 0,
        }
    }

    /// Caps the number of documents returned per call.
    pub fn with_page_size(mut self, page_size: usize) -> Self {
        self.page_size = page_size.max(1);
        self
    }

    /// Makes the given 1-based call numbers answer with a rate-limit signal.
    pub fn with_rate_limits(mut self, calls: impl IntoIterator<Item = usize>) -> Self {
        self.rate_limited_calls = calls.into_iter().collect();
        self
    }

    pub fn calls(&self) -> usize {
        self.calls
    }
}

impl SourceAdapter for FixtureAdapter {
    fn name(&self) -> &str {
        &self.name
    }

    fn fetch(&mut self, query: &Query, max_items: usize) -> Result<FetchOutcome, SourceError> {
        self.calls += 1;
        if self.rate_limited_calls.contains(&self.calls) {
            return Ok(FetchOutcome::RateLimited);
        }
        let Some(docs) = self.pages.get(query) else {
            return Ok(FetchOutcome::Exhausted);
        };
        let cursor = self.cursors.entry(query.clone()).or_insert(0);
        if *cursor >= docs.len() {
            return Ok(FetchOutcome::Exhausted);
        }
        let end = docs.len().min(*cursor + max_items.min(self.page_size));
        let page = docs[*cursor..end].to_vec();
        *cursor = end;
        Ok(FetchOutcome::Items(page))
    }
}
