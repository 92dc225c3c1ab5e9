//! Per-company feature rows: pooled keyword means, the coverage gate, and
//! column-mean imputation.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{KeywordTaxonomy, Network, WIKIPEDIA};
use crate::sentiment::ScoredDocument;

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("scored corpus is empty")]
    EmptyInput,
    #[error("no company has at least {min_docs} documents in every keyword")]
    NoCompanies { min_docs: usize },
    #[error("feature {0:?} has no observed value to impute from")]
    FullyMissingColumn(String),
    #[error("feature table: {0}")]
    Csv(#[from] csv::Error),
    #[error("feature table i/o: {0}")]
    Io(#[from] io::Error),
    #[error("feature table row {row}: {reason}")]
    Malformed { row: usize, reason: String },
}

/// How keyword features are laid out.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureLayout {
    /// One column per keyword, pooling twitter, linkedin and news.
    #[default]
    Pooled,
    /// One column per (network, keyword) pair, named `network:keyword`.
    PerNetwork,
}

impl FeatureLayout {
    pub fn feature_names(&self, taxonomy: &KeywordTaxonomy) -> Vec<String> {
        match self {
            FeatureLayout::Pooled => taxonomy.feature_names(),
            FeatureLayout::PerNetwork => taxonomy
                .keywords()
                .flat_map(|kw| {
                    Network::KEYWORD_NETWORKS
                        .iter()
                        .map(move |n| format!("{n}:{kw}"))
                })
                .chain(std::iter::once(WIKIPEDIA.to_string()))
                .collect(),
        }
    }

    fn column_of(&self, doc: &ScoredDocument) -> String {
        match (self, doc.network) {
            (_, Network::Wikipedia) => WIKIPEDIA.to_string(),
            (FeatureLayout::Pooled, _) => doc.keyword.clone(),
            (FeatureLayout::PerNetwork, n) => format!("{n}:{}", doc.keyword),
        }
    }
}

/// Mean polarity of one company's documents under one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubcategoryScore {
    pub company: String,
    pub keyword: String,
    /// `None` until imputation when no document landed in this cell.
    pub mean_polarity: Option<f64>,
    pub doc_count: usize,
}

/// Means for one company's scored documents. Irrelevant and self-reported
/// results are skipped, as are keywords outside the taxonomy.
pub fn subcategory_means<'a>(
    company: &str,
    scored: impl IntoIterator<Item = &'a ScoredDocument>,
    taxonomy: &KeywordTaxonomy,
    layout: FeatureLayout,
) -> Vec<SubcategoryScore> {
    let names = layout.feature_names(taxonomy);
    let mut sums: BTreeMap<&str, (f64, usize)> =
        names.iter().map(|n| (n.as_str(), (0.0, 0))).collect();
    for doc in scored {
        if doc.company != company || !doc.result.counts() {
            continue;
        }
        let column = layout.column_of(doc);
        match sums.get_mut(column.as_str()) {
            Some((sum, n)) => {
                *sum += doc.result.polarity;
                *n += 1;
            }
            None => log::debug!(
                "{}: keyword {:?} not in taxonomy, skipped",
                doc.id,
                doc.keyword
            ),
        }
    }
    names
        .iter()
        .map(|name| {
            let (sum, n) = sums[name.as_str()];
            SubcategoryScore {
                company: company.to_string(),
                keyword: name.clone(),
                mean_polarity: (n > 0).then(|| sum / n as f64),
                doc_count: n,
            }
        })
        .collect()
}

/// Companies whose every keyword holds at least `min_docs` documents
/// (pooled over networks). The wikipedia column is not gated.
pub fn filter_companies(
    scores: &BTreeMap<String, Vec<SubcategoryScore>>,
    taxonomy: &KeywordTaxonomy,
    min_docs: usize,
) -> BTreeSet<String> {
    scores
        .iter()
        .filter(|(_, subs)| {
            taxonomy.keywords().all(|kw| {
                let pooled: usize = subs
                    .iter()
                    .filter(|s| {
                        s.keyword == kw || s.keyword.rsplit_once(':').is_some_and(|(_, k)| k == kw)
                    })
                    .map(|s| s.doc_count)
                    .sum();
                pooled >= min_docs
            })
        })
        .map(|(c, _)| c.clone())
        .collect()
}

/// Fills each missing cell with the mean of the observed cells in its
/// column. Returns the dense matrix and the mask of filled cells.
pub fn impute(
    rows: &[Vec<Option<f64>>],
    feature_names: &[String],
) -> Result<(Vec<Vec<f64>>, Vec<Vec<bool>>), AggregateError> {
    let width = feature_names.len();
    let mut means = Vec::with_capacity(width);
    for (j, name) in feature_names.iter().enumerate() {
        let (sum, n) = rows
            .iter()
            .filter_map(|r| r[j])
            .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
        if n == 0 {
            return Err(AggregateError::FullyMissingColumn(name.clone()));
        }
        means.push(sum / n as f64);
    }
    let values = rows
        .iter()
        .map(|r| r.iter().zip(&means).map(|(v, m)| v.unwrap_or(*m)).collect())
        .collect();
    let mask = rows
        .iter()
        .map(|r| r.iter().map(Option::is_none).collect())
        .collect();
    Ok((values, mask))
}

/// Company-by-feature matrix of mean polarities.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub companies: Vec<String>,
    pub feature_names: Vec<String>,
    pub values: Vec<Vec<f64>>,
    /// Documents behind each cell; zero marks an imputed cell. Absent when
    /// the matrix was read without its counts table.
    pub counts: Option<Vec<Vec<usize>>>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.companies.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn row(&self, company: &str) -> Option<&[f64]> {
        self.companies
            .iter()
            .position(|c| c == company)
            .map(|i| self.values[i].as_slice())
    }

    pub fn is_imputed(&self, row: usize, col: usize) -> bool {
        self.counts.as_ref().is_some_and(|c| c[row][col] == 0)
    }

    /// Sibling path of the counts table: `x.csv` -> `x_counts.csv`.
    pub fn counts_path(features: &Path) -> PathBuf {
        let stem = features
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let ext = features
            .extension()
            .map(|e| e.to_string_lossy().into_owned());
        let name = match ext {
            Some(e) => format!("{stem}_counts.{e}"),
            None => format!("{stem}_counts"),
        };
        features.with_file_name(name)
    }

    fn header(&self) -> Vec<String> {
        std::iter::once("company".to_string())
            .chain(self.feature_names.iter().cloned())
            .collect()
    }

    /// Values rendered at six decimals.
    pub fn values_csv(&self) -> Result<Vec<u8>, AggregateError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header())?;
        for (company, row) in self.companies.iter().zip(&self.values) {
            let mut rec = vec![company.clone()];
            rec.extend(row.iter().map(|v| format!("{v:.6}")));
            w.write_record(rec)?;
        }
        w.into_inner()
            .map_err(|e| AggregateError::Io(e.into_error()))
    }

    pub fn counts_csv(&self) -> Result<Option<Vec<u8>>, AggregateError> {
        let Some(counts) = &self.counts else {
            return Ok(None);
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.header())?;
        for (company, row) in self.companies.iter().zip(counts) {
            let mut rec = vec![company.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(rec)?;
        }
        Ok(Some(
            w.into_inner()
                .map_err(|e| AggregateError::Io(e.into_error()))?,
        ))
    }

    /// Writes the values table and, when known, the counts table beside it.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), AggregateError> {
        let path = path.as_ref();
        crate::io::write_atomic(path, &self.values_csv()?)?;
        if let Some(counts) = self.counts_csv()? {
            crate::io::write_atomic(Self::counts_path(path), &counts)?;
        }
        Ok(())
    }

    /// Reads the values table; the counts table is picked up if present.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, AggregateError> {
        let path = path.as_ref();
        let (names, companies, values) = read_table(File::open(path)?, |s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| (-1.0..=1.0).contains(v))
                .ok_or_else(|| format!("value {s:?} is not a polarity in [-1, 1]"))
        })?;
        let counts_path = Self::counts_path(path);
        let counts = if counts_path.exists() {
            let (cnames, ccompanies, counts) = read_table(File::open(&counts_path)?, |s| {
                s.parse::<usize>().map_err(|_| format!("bad count {s:?}"))
            })?;
            if cnames != names || ccompanies != companies {
                return Err(AggregateError::Malformed {
                    row: 1,
                    reason: format!("{} does not match the feature table", counts_path.display()),
                });
            }
            Some(counts)
        } else {
            None
        };
        Ok(FeatureMatrix {
            companies,
            feature_names: names,
            values,
            counts,
        })
    }
}

type Table<T> = (Vec<String>, Vec<String>, Vec<Vec<T>>);

fn read_table<R: io::Read, T>(
    reader: R,
    parse: impl Fn(&str) -> Result<T, String>,
) -> Result<Table<T>, AggregateError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let header = rdr.headers()?.clone();
    if header.get(0) != Some("company") || header.len() < 2 {
        return Err(AggregateError::Malformed {
            row: 1,
            reason: "header must be company,<features...>".into(),
        });
    }
    let names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    let mut companies = Vec::new();
    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let row_no = i + 2;
        let rec = rec?;
        let company = rec.get(0).unwrap_or_default().to_string();
        if company.is_empty() || !seen.insert(company.clone()) {
            return Err(AggregateError::Malformed {
                row: row_no,
                reason: format!("empty or repeated company {company:?}"),
            });
        }
        let row = rec
            .iter()
            .skip(1)
            .map(|s| parse(s.trim()))
            .collect::<Result<Vec<T>, String>>()
            .map_err(|reason| AggregateError::Malformed {
                row: row_no,
                reason,
            })?;
        companies.push(company);
        rows.push(row);
    }
    Ok((names, companies, rows))
}

/// Gate, pool, and impute a scored corpus into the feature matrix. Rows are
/// in company-name order, columns in taxonomy order then `wikipedia`.
pub fn build_feature_matrix(
    scored: &[ScoredDocument],
    taxonomy: &KeywordTaxonomy,
    min_docs: usize,
    layout: FeatureLayout,
) -> Result<FeatureMatrix, AggregateError> {
    if scored.is_empty() {
        return Err(AggregateError::EmptyInput);
    }
    let mut by_company: BTreeMap<&str, Vec<&ScoredDocument>> = BTreeMap::new();
    for doc in scored {
        by_company
            .entry(doc.company.as_str())
            .or_default()
            .push(doc);
    }
    let per_company: BTreeMap<String, Vec<SubcategoryScore>> = by_company
        .iter()
        .map(|(company, docs)| {
            (
                company.to_string(),
                subcategory_means(company, docs.iter().copied(), taxonomy, layout),
            )
        })
        .collect();
    let retained = filter_companies(&per_company, taxonomy, min_docs);
    if retained.is_empty() {
        return Err(AggregateError::NoCompanies { min_docs });
    }
    let dropped = per_company.len() - retained.len();
    if dropped > 0 {
        log::info!("coverage gate (min_docs={min_docs}) dropped {dropped} companies");
    }
    let feature_names = layout.feature_names(taxonomy);
    let companies: Vec<String> = retained.into_iter().collect();
    let gaps: Vec<Vec<Option<f64>>> = companies
        .iter()
        .map(|c| per_company[c].iter().map(|s| s.mean_polarity).collect())
        .collect();
    let counts = companies
        .iter()
        .map(|c| per_company[c].iter().map(|s| s.doc_count).collect())
        .collect();
    let (values, _) = impute(&gaps, &feature_names)?;
    Ok(FeatureMatrix {
        companies,
        feature_names,
        values,
        counts: Some(counts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sentiment::{ScoreMode, SentimentResult};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rec(company: &str, network: Network, keyword: &str, polarity: f64) -> ScoredDocument {
        ScoredDocument {
            id: format!("{company}-{network}-{keyword}-{polarity}"),
            company: company.into(),
            network,
            keyword: keyword.into(),
            result: SentimentResult {
                relevant: true,
                polarity,
                valenced_token_count: 1,
                mode: if network.is_short_form() {
                    ScoreMode::ShortPost
                } else {
                    ScoreMode::LongArticle
                },
            },
        }
    }

    fn small() -> KeywordTaxonomy {
        KeywordTaxonomy::new(
            vec!["carbon".into()],
            vec!["labor".into()],
            vec!["fraud".into()],
        )
        .unwrap()
    }

    #[test]
    fn pooled_mean_and_empty_cell() {
        let docs = vec![
            rec("A", Network::Twitter, "carbon", 0.2),
            rec("A", Network::News, "carbon", -0.2),
        ];
        let subs = subcategory_means("A", &docs, &small(), FeatureLayout::Pooled);
        assert_eq!(subs[0].keyword, "carbon");
        assert_eq!(subs[0].mean_polarity, Some(0.0));
        assert_eq!(subs[0].doc_count, 2);
        assert_eq!(subs[1].mean_polarity, None);
        assert_eq!(subs[1].doc_count, 0);
        assert_eq!(subs.len(), 4);
    }

    #[test]
    fn skips_irrelevant_and_excluded() {
        let mut a = rec("A", Network::Twitter, "carbon", 0.9);
        a.result.relevant = false;
        let mut b = rec("A", Network::Linkedin, "carbon", 0.9);
        b.result.mode = ScoreMode::ExcludedSelfReport;
        let c = rec("A", Network::News, "carbon", 0.1);
        let subs = subcategory_means("A", &[a, b, c], &small(), FeatureLayout::Pooled);
        assert_eq!(subs[0].doc_count, 1);
        assert_eq!(subs[0].mean_polarity, Some(0.1));
    }

    #[test]
    fn three_keywords_two_networks_by_hand() {
        let mut docs = Vec::new();
        let pols = [0.1, -0.3, 0.25, 0.4, -0.05, 0.6];
        for (i, kw) in ["carbon", "labor", "fraud"].iter().enumerate() {
            docs.push(rec("A", Network::Twitter, kw, pols[2 * i]));
            docs.push(rec("A", Network::News, kw, pols[2 * i + 1]));
        }
        let subs = subcategory_means("A", &docs, &small(), FeatureLayout::Pooled);
        assert!((subs[0].mean_polarity.unwrap() - (-0.1)).abs() < 1e-15);
        assert!((subs[1].mean_polarity.unwrap() - 0.325).abs() < 1e-15);
        assert!((subs[2].mean_polarity.unwrap() - 0.275).abs() < 1e-15);
    }

    fn gate_input(counts: &[usize]) -> BTreeMap<String, Vec<SubcategoryScore>> {
        let subs = ["carbon", "labor", "fraud", WIKIPEDIA]
            .iter()
            .zip(counts)
            .map(|(k, &n)| SubcategoryScore {
                company: "A".into(),
                keyword: k.to_string(),
                mean_polarity: Some(0.0),
                doc_count: n,
            })
            .collect();
        BTreeMap::from([("A".to_string(), subs)])
    }

    #[test]
    fn coverage_gate_boundary() {
        let t = small();
        assert_eq!(filter_companies(&gate_input(&[5, 5, 5, 0]), &t, 5).len(), 1);
        assert!(filter_companies(&gate_input(&[5, 4, 5, 9]), &t, 5).is_empty());
        assert_eq!(filter_companies(&gate_input(&[0, 0, 0, 0]), &t, 0).len(), 1);
    }

    #[test]
    fn impute_examples() {
        let names = vec!["x".to_string()];
        let (v, m) = impute(&[vec![Some(0.2)], vec![None], vec![Some(0.4)]], &names).unwrap();
        assert!((v[1][0] - 0.3).abs() < 1e-15);
        assert_eq!(m, vec![vec![false], vec![true], vec![false]]);

        let full = vec![vec![Some(0.1), Some(0.2)], vec![Some(-0.3), Some(0.0)]];
        let names2 = vec!["a".to_string(), "b".to_string()];
        let (v, _) = impute(&full, &names2).unwrap();
        assert_eq!(v, vec![vec![0.1, 0.2], vec![-0.3, 0.0]]);

        let err = impute(&[vec![Some(0.1), None]], &names2).unwrap_err();
        assert!(matches!(err, AggregateError::FullyMissingColumn(ref f) if f == "b"));
    }

    #[test]
    fn build_single_company_full_coverage() {
        let t = KeywordTaxonomy::default();
        let mut docs: Vec<ScoredDocument> = t
            .keywords()
            .map(|k| rec("A", Network::News, k, 0.3))
            .collect();
        docs.push(rec("A", Network::Wikipedia, WIKIPEDIA, 0.1));
        let m = build_feature_matrix(&docs, &t, 1, FeatureLayout::Pooled).unwrap();
        assert_eq!(m.n_rows(), 1);
        assert_eq!(m.n_features(), 20);
        assert!((0..20).all(|j| !m.is_imputed(0, j)));
    }

    #[test]
    fn build_errors() {
        let t = small();
        assert!(matches!(
            build_feature_matrix(&[], &t, 1, FeatureLayout::Pooled),
            Err(AggregateError::EmptyInput)
        ));
        let docs = vec![rec("A", Network::News, "carbon", 0.3)];
        assert!(matches!(
            build_feature_matrix(&docs, &t, 1, FeatureLayout::Pooled),
            Err(AggregateError::NoCompanies { .. })
        ));
    }

    #[test]
    fn per_network_layout() {
        let t = small();
        let docs = vec![
            rec("A", Network::Twitter, "carbon", 0.2),
            rec("A", Network::News, "carbon", -0.4),
            rec("A", Network::Linkedin, "labor", 0.1),
            rec("A", Network::Linkedin, "carbon", 0.3),
            rec("A", Network::Twitter, "labor", 0.3),
            rec("A", Network::News, "labor", 0.3),
            rec("A", Network::Linkedin, "fraud", 0.1),
            rec("A", Network::News, "fraud", 0.1),
            rec("B", Network::Twitter, "fraud", 0.1),
            rec("B", Network::News, "carbon", 0.0),
            rec("B", Network::Twitter, "labor", 0.5),
            rec("B", Network::Wikipedia, WIKIPEDIA, 0.5),
        ];
        let m = build_feature_matrix(&docs, &t, 1, FeatureLayout::PerNetwork).unwrap();
        assert_eq!(m.n_features(), 10);
        assert_eq!(m.feature_names[0], "twitter:carbon");
        assert_eq!(m.values[0][0], 0.2);
        assert_eq!(m.values[1][0], 0.2);
        assert!(m.is_imputed(1, 0));
    }

    #[test]
    fn csv_round_trip_at_six_decimals() {
        let m = FeatureMatrix {
            companies: vec!["Acme, Inc".into(), "Globex".into()],
            feature_names: vec!["carbon".into(), "human rights".into(), WIKIPEDIA.into()],
            values: vec![vec![0.123456789, -0.5, 1.0], vec![-1e-9, 0.0, 0.3333333]],
            counts: Some(vec![vec![3, 0, 1], vec![7, 8, 0]]),
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("features.csv");
        m.save(&p).unwrap();
        assert!(dir.path().join("features_counts.csv").exists());
        let back = FeatureMatrix::load(&p).unwrap();
        assert_eq!(back.companies, m.companies);
        assert_eq!(back.counts, m.counts);
        assert_eq!(back.values_csv().unwrap(), m.values_csv().unwrap());
        for (a, b) in back.values.iter().flatten().zip(m.values.iter().flatten()) {
            assert!((a - b).abs() <= 5e-7);
        }
    }

    #[test]
    fn load_rejects_out_of_range() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.csv");
        std::fs::write(&p, "company,carbon\nA,1.5\n").unwrap();
        assert!(matches!(
            FeatureMatrix::load(&p),
            Err(AggregateError::Malformed { row: 2, .. })
        ));
    }

    #[test]
    fn masked_imputation_matches_column_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.gen_range(2..30);
            let cols = rng.gen_range(1..8);
            let full: Vec<Vec<f64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let mut masked: Vec<Vec<Option<f64>>> = full
                .iter()
                .map(|r| r.iter().map(|v| Some(*v)).collect())
                .collect();
            for r in masked.iter_mut() {
                for c in r.iter_mut() {
                    if rng.gen_bool(0.2) {
                        *c = None;
                    }
                }
            }
            for j in 0..cols {
                masked[0][j] = Some(full[0][j]);
            }
            let names: Vec<String> = (0..cols).map(|j| format!("f{j}")).collect();
            let (values, mask) = impute(&masked, &names).unwrap();
            for j in 0..cols {
                let observed: Vec<f64> = masked.iter().filter_map(|r| r[j]).collect();
                let mut sum = 0.0;
                for v in &observed {
                    sum += v;
                }
                let mean = sum / observed.len() as f64;
                for i in 0..rows {
                    if mask[i][j] {
                        assert_eq!(values[i][j], mean);
                    } else {
                        assert_eq!(values[i][j], full[i][j]);
                    }
                }
                let filled_mean = values.iter().map(|r| r[j]).sum::<f64>() / rows as f64;
                assert!((filled_mean - mean).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn gate_monotone_in_min_docs(
            counts in prop::collection::vec(prop::collection::vec(0usize..9, 4), 1..12),
            lo in 0usize..9,
            bump in 0usize..5,
        ) {
            let t = small();
            let scores: BTreeMap<String, Vec<SubcategoryScore>> = counts.iter().enumerate().map(|(i, cs)| {
                let company = format!("C{i}");
                let subs = ["carbon", "labor", "fraud", WIKIPEDIA].iter().zip(cs).map(|(k, &n)| SubcategoryScore {
                    company: company.clone(),
                    keyword: k.to_string(),
                    mean_polarity: (n > 0).then_some(0.0),
                    doc_count: n,
                }).collect();
                (company, subs)
            }).collect();
            let low = filter_companies(&scores, &t, lo);
            let high = filter_companies(&scores, &t, lo + bump);
            prop_assert!(high.is_subset(&low));
        }

        #[test]
        fn pooled_mean_is_brute_force(pols in prop::collection::vec((0usize..3, -0.99f64..0.99), 0..40)) {
            let t = small();
            let kws = ["carbon", "labor", "fraud"];
            let docs: Vec<ScoredDocument> = pols.iter().enumerate().map(|(i, (k, p))| {
                let mut r = rec("A", Network::ALL[i % 3], kws[*k], *p);
                r.id = i.to_string();
                r
            }).collect();
            let subs = subcategory_means("A", &docs, &t, FeatureLayout::Pooled);
            for (j, kw) in kws.iter().enumerate() {
                let xs: Vec<f64> = pols.iter().filter(|(k, _)| kws[*k] == *kw).map(|(_, p)| *p).collect();
                prop_assert_eq!(subs[j].doc_count, xs.len());
                if xs.is_empty() {
                    prop_assert_eq!(subs[j].mean_polarity, None);
                } else {
                    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                    prop_assert!((subs[j].mean_polarity.unwrap() - mean).abs() < 1e-12);
                    prop_assert!(subs[j].mean_polarity.unwrap().abs() <= 1.0);
                }
            }
        }
    }
}
