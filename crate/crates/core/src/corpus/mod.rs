//! Documents, companies, the keyword taxonomy and the collection layer.

mod collect;
mod document;
mod profile;
mod taxonomy;

pub use collect::{
    build_queries, collect, CollectError, Collection, FetchOutcome, FixtureAdapter, Query,
    RatePolicy, RecordingSleeper, Shortfall, Sleeper, SourceAdapter, SourceError, ThreadSleeper,
};
pub use document::{
    load_corpus, parse_corpus, save_corpus, write_corpus, CorpusError, Document, Network,
};
pub use profile::{CompanyProfile, ProfileError};
pub use taxonomy::{KeywordTaxonomy, Pillar, TaxonomyError, WIKIPEDIA};
