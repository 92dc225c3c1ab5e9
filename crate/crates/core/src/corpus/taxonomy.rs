use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Pseudo-keyword carried by wikipedia documents and the trailing feature column.
pub const WIKIPEDIA: &str = "wikipedia";

#[derive(Debug, Error, PartialEq)]
pub enum TaxonomyError {
    #[error("taxonomy has no keywords")]
    Empty,
    #[error("keyword {0:?} appears more than once")]
    Duplicate(String),
    #[error("keyword {0:?} is invalid: {1}")]
    Invalid(String, &'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pillar {
    Environment,
    Social,
    Governance,
}

impl fmt::Display for Pillar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pillar::Environment => "E",
            Pillar::Social => "S",
            Pillar::Governance => "G",
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTaxonomy {
    #[serde(alias = "E", default)]
    environment: Vec<String>,
    #[serde(alias = "S", default)]
    social: Vec<String>,
    #[serde(alias = "G", default)]
    governance: Vec<String>,
}

/// ESG keywords grouped by pillar.
///
/// Feature order is environment, then social, then governance, each in
/// declaration order, followed by the [`WIKIPEDIA`] pseudo-category.
/// Keywords are lowercase and at most two words; two-word keywords are
/// matched as token bigrams.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTaxonomy")]
pub struct KeywordTaxonomy {
    environment: Vec<String>,
    social: Vec<String>,
    governance: Vec<String>,
}

impl TryFrom<RawTaxonomy> for KeywordTaxonomy {
    type Error = TaxonomyError;

    fn try_from(raw: RawTaxonomy) -> Result<Self, Self::Error> {
        KeywordTaxonomy::new(raw.environment, raw.social, raw.governance)
    }
}

impl Default for KeywordTaxonomy {
    fn default() -> Self {
        let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        KeywordTaxonomy {
            environment: owned(&[
                "environment",
                "carbon",
                "climate",
                "emission",
                "pollution",
                "sustainability",
            ]),
            social: owned(&[
                "social",
                "community",
                "discrimination",
                "diversity",
                "human rights",
                "labor",
            ]),
            governance: owned(&[
                "governance",
                "compensation",
                "corruption",
                "ethical",
                "fraud",
                "justice",
                "transparency",
            ]),
        }
    }
}

impl KeywordTaxonomy {
    pub fn new(
        environment: Vec<String>,
        social: Vec<String>,
        governance: Vec<String>,
    ) -> Result<Self, TaxonomyError> {
        let taxonomy = KeywordTaxonomy {
            environment,
            social,
            governance,
        };
        taxonomy.validate()?;
        Ok(taxonomy)
    }

    fn validate(&self) -> Result<(), TaxonomyError> {
        let mut seen = BTreeSet::new();
        for kw in self.keywords() {
            let words: Vec<&str> = kw.split(' ').collect();
            if kw.is_empty() || words.iter().any(|w| w.is_empty()) {
                return Err(TaxonomyError::Invalid(kw.to_string(), "empty word"));
            }
            if words.len() > 2 {
                return Err(TaxonomyError::Invalid(
                    kw.to_string(),
                    "more than two words",
                ));
            }
            if kw.chars().any(|c| c.is_uppercase()) {
                return Err(TaxonomyError::Invalid(kw.to_string(), "not lowercase"));
            }
            if kw == WIKIPEDIA {
                return Err(TaxonomyError::Invalid(kw.to_string(), "reserved name"));
            }
            if !seen.insert(kw) {
                return Err(TaxonomyError::Duplicate(kw.to_string()));
            }
        }
        if seen.is_empty() {
            return Err(TaxonomyError::Empty);
        }
        Ok(())
    }

    pub fn pillar(&self, pillar: Pillar) -> &[String] {
        match pillar {
            Pillar::Environment => &self.environment,
            Pillar::Social => &self.social,
            Pillar::Governance => &self.governance,
        }
    }

    /// Keywords in canonical feature order.
    pub fn keywords(&self) -> impl Iterator<Item = &str> + '_ {
        self.environment
            .iter()
            .chain(&self.social)
            .chain(&self.governance)
            .map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.environment.len() + self.social.len() + self.governance.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, keyword: &str) -> bool {
        self.keywords().any(|k| k == keyword)
    }

    pub fn pillar_of(&self, keyword: &str) -> Option<Pillar> {
        [Pillar::Environment, Pillar::Social, Pillar::Governance]
            .into_iter()
            .find(|p| self.pillar(*p).iter().any(|k| k == keyword))
    }

    /// Column names of the feature matrix: every keyword, then `wikipedia`.
    pub fn feature_names(&self) -> Vec<String> {
        self.keywords()
            .map(str::to_string)
            .chain(std::iter::once(WIKIPEDIA.to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matches_collection_keyword_list() {
        let t = KeywordTaxonomy::default();
        assert_eq!(t.pillar(Pillar::Environment).len(), 6);
        assert_eq!(t.pillar(Pillar::Social).len(), 6);
        assert_eq!(t.pillar(Pillar::Governance).len(), 7);
        assert_eq!(t.len(), 19);
        assert!(t.validate().is_ok());
        let names = t.feature_names();
        assert_eq!(names.len(), 20);
        assert_eq!(names[0], "environment");
        assert_eq!(names[10], "human rights");
        assert_eq!(names[19], WIKIPEDIA);
        assert_eq!(t.pillar_of("fraud"), Some(Pillar::Governance));
    }

    #[test]
    fn rejects_duplicates_across_pillars() {
        let err =
            KeywordTaxonomy::new(vec!["carbon".into()], vec!["carbon".into()], vec![]).unwrap_err();
        assert_eq!(err, TaxonomyError::Duplicate("carbon".into()));
    }

    #[test]
    fn rejects_empty_and_reserved() {
        assert_eq!(
            KeywordTaxonomy::new(vec![], vec![], vec![]).unwrap_err(),
            TaxonomyError::Empty
        );
        assert!(KeywordTaxonomy::new(vec!["wikipedia".into()], vec![], vec![]).is_err());
        assert!(KeywordTaxonomy::new(vec!["Carbon".into()], vec![], vec![]).is_err());
        assert!(KeywordTaxonomy::new(vec!["a b c".into()], vec![], vec![]).is_err());
    }

    #[test]
    fn parses_short_pillar_names() {
        let t: KeywordTaxonomy =
            serde_json::from_str(r#"{"E":["carbon"],"S":["labor"],"G":["fraud"]}"#).unwrap();
        assert_eq!(
            t.feature_names(),
            vec!["carbon", "labor", "fraud", "wikipedia"]
        );
        let dup = serde_json::from_str::<KeywordTaxonomy>(r#"{"E":["carbon"],"S":["carbon"]}"#);
        assert!(dup.is_err());
    }
}
