//! Company-mention and ESG-keyword filtering.
//!
//! A document counts when it names the company and touches at least one
//! taxonomy keyword. Company detection is a case-sensitive alias match with
//! a noun blocklist for aliases that are also ordinary words; the
//! [`MentionDetector`] trait lets a statistical recognizer replace it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{CompanyProfile, Document, KeywordTaxonomy, Network};
use crate::preprocess::{clean_text, tokenize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionReason {
    NoAlias,
    LowercaseAmbiguous,
    BlocklistedSense,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MentionVerdict {
    pub mentioned: bool,
    pub matched_alias: Option<String>,
    pub rejection_reason: Option<RejectionReason>,
}

impl MentionVerdict {
    pub fn matched(alias: impl Into<String>) -> Self {
        MentionVerdict {
            mentioned: true,
            matched_alias: Some(alias.into()),
            rejection_reason: None,
        }
    }

    pub fn rejected(reason: RejectionReason) -> Self {
        MentionVerdict {
            mentioned: false,
            matched_alias: None,
            rejection_reason: Some(reason),
        }
    }
}

pub trait MentionDetector: Send + Sync {
    fn detect(&self, text: &str, profile: &CompanyProfile) -> MentionVerdict;
}

/// Case-sensitive alias matching with a following-noun blocklist.
#[derive(Debug, Default, Clone, Copy)]
pub struct CaseBlocklistDetector;

impl MentionDetector for CaseBlocklistDetector {
    fn detect(&self, text: &str, profile: &CompanyProfile) -> MentionVerdict {
        entity_mention(text, profile)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

/// Byte offsets where `needle` occurs as a whole word.
fn word_occurrences<'a>(haystack: &'a str, needle: &'a str) -> impl Iterator<Item = usize> + 'a {
    haystack
        .match_indices(needle)
        .filter_map(move |(start, m)| {
            let before = haystack[..start].chars().next_back();
            let after = haystack[start + m.len()..].chars().next();
            let bounded = !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char);
            bounded.then_some(start)
        })
}

/// Lowercased word directly after a mention, skipping a possessive `'s`.
/// Punctuation between the mention and the next word breaks the link.
fn following_word(rest: &str) -> Option<String> {
    let rest = rest
        .strip_prefix("'s")
        .or_else(|| rest.strip_prefix("\u{2019}s"))
        .unwrap_or(rest);
    let trimmed = rest.trim_start();
    if trimmed.len() == rest.len() && !rest.is_empty() {
        return None;
    }
    let word: String = trimmed.chars().take_while(|c| is_word_char(*c)).collect();
    (!word.is_empty()).then(|| word.to_lowercase())
}

pub fn entity_mention(text: &str, profile: &CompanyProfile) -> MentionVerdict {
    let mut blocklisted = false;
    for name in profile.names() {
        let ambiguous = profile.is_ambiguous(name);
        for start in word_occurrences(text, name) {
            if ambiguous {
                let rest = &text[start + name.len()..];
                if following_word(rest).is_some_and(|w| profile.is_blocklisted(&w)) {
                    blocklisted = true;
                    continue;
                }
            }
            return MentionVerdict::matched(name);
        }
    }
    if blocklisted {
        return MentionVerdict::rejected(RejectionReason::BlocklistedSense);
    }
    let lowered = text.to_lowercase();
    let differently_cased = profile.names().into_iter().any(|n| {
        word_occurrences(&lowered, &n.to_lowercase())
            .next()
            .is_some()
    });
    if differently_cased {
        MentionVerdict::rejected(RejectionReason::LowercaseAmbiguous)
    } else {
        MentionVerdict::rejected(RejectionReason::NoAlias)
    }
}

/// Taxonomy keywords present as tokens (or token bigrams for two-word keywords).
pub fn detect_keywords(tokens: &[String], taxonomy: &KeywordTaxonomy) -> BTreeSet<String> {
    let mut found = BTreeSet::new();
    for kw in taxonomy.keywords() {
        let hit = match kw.split_once(' ') {
            None => tokens.iter().any(|t| t == kw),
            Some((a, b)) => tokens.windows(2).any(|w| w[0] == a && w[1] == b),
        };
        if hit {
            found.insert(kw.to_string());
        }
    }
    found
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IrrelevantReason {
    NoAlias,
    LowercaseAmbiguous,
    BlocklistedSense,
    NoKeyword,
}

impl From<RejectionReason> for IrrelevantReason {
    fn from(r: RejectionReason) -> Self {
        match r {
            RejectionReason::NoAlias => IrrelevantReason::NoAlias,
            RejectionReason::LowercaseAmbiguous => IrrelevantReason::LowercaseAmbiguous,
            RejectionReason::BlocklistedSense => IrrelevantReason::BlocklistedSense,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relevance {
    pub relevant: bool,
    pub mention: MentionVerdict,
    pub keywords: BTreeSet<String>,
}

impl Relevance {
    pub fn reason(&self) -> Option<IrrelevantReason> {
        if self.relevant {
            None
        } else if let Some(r) = self.mention.rejection_reason {
            Some(r.into())
        } else {
            Some(IrrelevantReason::NoKeyword)
        }
    }
}

pub fn is_relevant(
    doc: &Document,
    profile: &CompanyProfile,
    taxonomy: &KeywordTaxonomy,
) -> Relevance {
    is_relevant_with(&CaseBlocklistDetector, doc, profile, taxonomy)
}

/// Mention AND (keyword OR wikipedia). Wikipedia pages are about the company
/// as a whole, so the keyword requirement is waived for them.
pub fn is_relevant_with<D: MentionDetector + ?Sized>(
    detector: &D,
    doc: &Document,
    profile: &CompanyProfile,
    taxonomy: &KeywordTaxonomy,
) -> Relevance {
    let cleaned = clean_text(&doc.text).cleaned;
    let mention = detector.detect(&cleaned, profile);
    let keywords = detect_keywords(&tokenize(&cleaned), taxonomy);
    let relevant = mention.mentioned && (!keywords.is_empty() || doc.network == Network::Wikipedia);
    Relevance {
        relevant,
        mention,
        keywords,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::WIKIPEDIA;
    use proptest::prelude::*;

    fn apple() -> CompanyProfile {
        CompanyProfile {
            canonical_name: "Apple".into(),
            aliases: vec!["Apple".into(), "AAPL".into()],
            ambiguous_aliases: vec!["Apple".into()],
            sector: "Information Technology".into(),
            blocklist_nouns: vec!["trees".into(), "pie".into(), "juice".into()],
        }
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn keyword_examples() {
        let t = KeywordTaxonomy::default();
        assert_eq!(
            detect_keywords(&toks(&["carbon", "tax"]), &t),
            BTreeSet::from(["carbon".to_string()])
        );
        assert_eq!(
            detect_keywords(&toks(&["human", "rights", "abuses"]), &t),
            BTreeSet::from(["human rights".to_string()])
        );
        assert!(detect_keywords(&[], &t).is_empty());
        assert!(detect_keywords(&toks(&["rights", "human"]), &t).is_empty());
    }

    #[test]
    fn lowercase_apple_is_the_fruit() {
        let v = entity_mention(
            "Spring climate is the best time to grow apple trees.",
            &apple(),
        );
        assert!(!v.mentioned);
        assert_eq!(
            v.rejection_reason,
            Some(RejectionReason::LowercaseAmbiguous)
        );
    }

    #[test]
    fn sentence_initial_company() {
        let v = entity_mention(
            "Apple is pouring 500 million dollars into initiatives for climate change",
            &apple(),
        );
        assert_eq!(v, MentionVerdict::matched("Apple"));
    }

    #[test]
    fn blocklisted_sense() {
        let v = entity_mention("I baked an Apple pie", &apple());
        assert_eq!(v.rejection_reason, Some(RejectionReason::BlocklistedSense));
        let v = entity_mention("Apple's pie stand", &apple());
        assert_eq!(v.rejection_reason, Some(RejectionReason::BlocklistedSense));
        // punctuation breaks the adjacency
        assert!(entity_mention("We love Apple. Pie is fine too", &apple()).mentioned);
        // an unambiguous alias is never blocklisted
        assert!(entity_mention("AAPL juice futures", &apple()).mentioned);
    }

    #[test]
    fn whole_words_only() {
        assert!(!entity_mention("Pineapple growers", &apple()).mentioned);
        assert!(!entity_mention("Applesauce", &apple()).mentioned);
        assert_eq!(
            entity_mention("nothing here", &apple()).rejection_reason,
            Some(RejectionReason::NoAlias)
        );
    }

    fn acme() -> CompanyProfile {
        CompanyProfile {
            canonical_name: "Acme".into(),
            aliases: vec!["ACME".into()],
            ..CompanyProfile::named("Acme")
        }
    }

    #[test]
    fn relevance_conjunction() {
        let t = KeywordTaxonomy::default();
        let tweet = Document::new(
            "1",
            "Acme",
            Network::Twitter,
            "emission",
            "Acme cut emission levels",
        );
        let r = is_relevant(&tweet, &acme(), &t);
        assert!(r.relevant);
        assert_eq!(r.reason(), None);

        let other = Document::new(
            "2",
            "Acme",
            Network::Twitter,
            "emission",
            "Someone cut emission levels",
        );
        let r = is_relevant(&other, &acme(), &t);
        assert!(!r.relevant);
        assert_eq!(r.reason(), Some(IrrelevantReason::NoAlias));

        let no_kw = Document::new(
            "3",
            "Acme",
            Network::News,
            "carbon",
            "Acme shipped a new widget",
        );
        assert_eq!(
            is_relevant(&no_kw, &acme(), &t).reason(),
            Some(IrrelevantReason::NoKeyword)
        );

        let wiki = Document::new(
            "4",
            "Acme",
            Network::Wikipedia,
            WIKIPEDIA,
            "Acme is a widget maker.",
        );
        assert!(is_relevant(&wiki, &acme(), &t).relevant);
    }

    fn arb_words() -> impl Strategy<Value = String> {
        prop::collection::vec(
            prop::sample::select(vec![
                "Acme", "acme", "ACME", "Apple", "apple", "pie", "trees", "carbon", "fraud",
                "labor", "human", "rights", "the", "Globex", "good", ".", ",",
            ]),
            0..14,
        )
        .prop_map(|w| w.join(" "))
    }

    proptest! {
        #[test]
        fn relevance_is_brute_force_conjunction(
            text in arb_words(),
            network in prop::sample::select(Network::ALL.to_vec()),
        ) {
            let t = KeywordTaxonomy::default();
            let keyword = if network == Network::Wikipedia { WIKIPEDIA } else { "carbon" };
            let doc = Document::new("x", "Acme", network, keyword, text.clone());
            let profile = acme();
            let got = is_relevant(&doc, &profile, &t);
            let cleaned = clean_text(&text).cleaned;
            let mention = entity_mention(&cleaned, &profile).mentioned;
            let kws = !detect_keywords(&tokenize(&cleaned), &t).is_empty();
            prop_assert_eq!(got.relevant, mention && (kws || network == Network::Wikipedia));
        }

        #[test]
        fn verdict_fields_consistent(text in arb_words()) {
            let v = entity_mention(&text, &apple());
            prop_assert_eq!(v.mentioned, v.matched_alias.is_some());
            prop_assert_eq!(!v.mentioned, v.rejection_reason.is_some());
        }

        #[test]
        fn never_matches_other_casing(text in arb_words()) {
            let v = entity_mention(&text, &apple());
            if let Some(alias) = v.matched_alias {
                prop_assert!(text.contains(&alias));
            }
            if !text.contains("Apple") && !text.contains("AAPL") {
                prop_assert!(!v.mentioned);
            }
        }

        #[test]
        fn adding_alias_is_monotone(text in arb_words(), extra in prop::sample::select(vec!["acme", "Globex", "ACME", "pie"])) {
            let base = CompanyProfile::named("Acme");
            let mut wider = base.clone();
            wider.aliases.push(extra.to_string());
            if entity_mention(&text, &base).mentioned {
                prop_assert!(entity_mention(&text, &wider).mentioned);
            }
        }
    }
}
