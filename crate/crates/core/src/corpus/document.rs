use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::taxonomy::WIKIPEDIA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Network {
    Twitter,
    Linkedin,
    News,
    Wikipedia,
}

impl Network {
    pub const ALL: [Network; 4] = [
        Network::Twitter,
        Network::Linkedin,
        Network::News,
        Network::Wikipedia,
    ];

    /// Networks queried once per keyword.
    pub const KEYWORD_NETWORKS: [Network; 3] = [Network::Twitter, Network::Linkedin, Network::News];

    pub fn as_str(&self) -> &'static str {
        match self {
            Network::Twitter => "twitter",
            Network::Linkedin => "linkedin",
            Network::News => "news",
            Network::Wikipedia => "wikipedia",
        }
    }

    pub fn is_short_form(&self) -> bool {
        matches!(self, Network::Twitter | Network::Linkedin)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One post or article about a company.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub id: String,
    pub company: String,
    pub network: Network,
    pub keyword: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author_affiliation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolved_link_text: Option<String>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        company: impl Into<String>,
        network: Network,
        keyword: impl Into<String>,
        text: impl Into<String>,
    ) -> Self {
        Document {
            id: id.into(),
            company: company.into(),
            network,
            keyword: keyword.into(),
            text: text.into(),
            timestamp: None,
            author_name: None,
            author_affiliation: None,
            link_url: None,
            resolved_link_text: None,
        }
    }

    /// Checks the per-document invariants.
    pub fn validate(&self) -> Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.company.trim().is_empty() {
            return Err("empty company".into());
        }
        if self.text.trim().is_empty() {
            return Err("empty text".into());
        }
        if self.network == Network::Wikipedia && self.keyword != WIKIPEDIA {
            return Err(format!(
                "wikipedia document must carry keyword {WIKIPEDIA:?}, found {:?}",
                self.keyword
            ));
        }
        if self.network != Network::Wikipedia && self.keyword == WIKIPEDIA {
            return Err(format!(
                "{} document carries the wikipedia keyword",
                self.network
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus i/o: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {source}")]
    Parse {
        line: usize,
        #[source]
        source: serde_json::Error,
    },
    #[error("line {line}: invalid document: {reason}")]
    Invalid { line: usize, reason: String },
    #[error("line {line}: duplicate document id {id:?}")]
    DuplicateId { line: usize, id: String },
}

/// Parses JSONL documents. Blank lines are skipped; line numbers are 1-based.
pub fn parse_corpus<R: BufRead>(reader: R) -> Result<Vec<Document>, CorpusError> {
    let mut docs = Vec::new();
    let mut ids = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let doc: Document = serde_json::from_str(&line).map_err(|source| CorpusError::Parse {
            line: line_no,
            source,
        })?;
        doc.validate().map_err(|reason| CorpusError::Invalid {
            line: line_no,
            reason,
        })?;
        if !ids.insert(doc.id.clone()) {
            return Err(CorpusError::DuplicateId {
                line: line_no,
                id: doc.id,
            });
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<Document>, CorpusError> {
    let file = File::open(path)?;
    parse_corpus(BufReader::new(file))
}

pub fn write_corpus<W: Write>(mut writer: W, docs: &[Document]) -> io::Result<()> {
    for doc in docs {
        serde_json::to_writer(&mut writer, doc)?;
        writer.write_all(b"\n")?;
    }
    writer.flush()
}

/// Writes the corpus atomically.
pub fn save_corpus(path: impl AsRef<Path>, docs: &[Document]) -> io::Result<()> {
    let mut buf = Vec::new();
    write_corpus(&mut buf, docs)?;
    crate::io::write_atomic(path, &buf)
}
