use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProfileError {
    #[error("company profile has an empty canonical name")]
    EmptyName,
    #[error("{company}: ambiguous alias {alias:?} is not listed in aliases")]
    AmbiguousNotAlias { company: String, alias: String },
    #[error("{company}: empty alias")]
    EmptyAlias { company: String },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    canonical_name: String,
    #[serde(default)]
    aliases: Vec<String>,
    #[serde(default)]
    ambiguous_aliases: Vec<String>,
    #[serde(default)]
    sector: String,
    #[serde(default)]
    blocklist_nouns: Vec<String>,
}

/// A rated company and the surface forms used to recognize it in text.
///
/// `ambiguous_aliases` are names that double as ordinary words ("Apple",
/// "Target"); their mentions are rejected when followed by one of the
/// `blocklist_nouns` ("apple pie", "apple trees").
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile")]
pub struct CompanyProfile {
    pub canonical_name: String,
    pub aliases: Vec<String>,
    pub ambiguous_aliases: Vec<String>,
    pub sector: String,
    pub blocklist_nouns: Vec<String>,
}

impl TryFrom<RawProfile> for CompanyProfile {
    type Error = ProfileError;

    fn try_from(raw: RawProfile) -> Result<Self, Self::Error> {
        let profile = CompanyProfile {
            canonical_name: raw.canonical_name,
            aliases: raw.aliases,
            ambiguous_aliases: raw.ambiguous_aliases,
            sector: raw.sector,
            blocklist_nouns: raw.blocklist_nouns,
        };
        profile.validate()?;
        Ok(profile)
    }
}

impl CompanyProfile {
    /// Profile with no extra aliases.
    pub fn named(name: impl Into<String>) -> Self {
        CompanyProfile {
            canonical_name: name.into(),
            aliases: Vec::new(),
            ambiguous_aliases: Vec::new(),
            sector: String::new(),
            blocklist_nouns: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), ProfileError> {
        if self.canonical_name.trim().is_empty() {
            return Err(ProfileError::EmptyName);
        }
        if self.aliases.iter().any(|a| a.trim().is_empty()) {
            return Err(ProfileError::EmptyAlias {
                company: self.canonical_name.clone(),
            });
        }
        for alias in &self.ambiguous_aliases {
            if !self.aliases.contains(alias) {
                return Err(ProfileError::AmbiguousNotAlias {
                    company: self.canonical_name.clone(),
                    alias: alias.clone(),
                });
            }
        }
        Ok(())
    }

    /// Canonical name followed by every alias, without repeats.
    pub fn names(&self) -> Vec<&str> {
        let mut out: Vec<&str> = vec![self.canonical_name.as_str()];
        for a in &self.aliases {
            if !out.contains(&a.as_str()) {
                out.push(a);
            }
        }
        out
    }

    pub fn is_ambiguous(&self, name: &str) -> bool {
        self.ambiguous_aliases.iter().any(|a| a == name)
    }

    pub fn is_blocklisted(&self, lowercase_token: &str) -> bool {
        self.blocklist_nouns
            .iter()
            .any(|b| b.to_lowercase() == lowercase_token)
    }
}
