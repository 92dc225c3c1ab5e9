//! Acceptance checks. Runs without the libtest harness so that every
//! criterion prints exactly one PASS or FAIL line.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use esg_core::aggregate::{build_feature_matrix, impute, FeatureLayout};
use esg_core::corpus::{CompanyProfile, Document, KeywordTaxonomy, Network};
use esg_core::eval::{evaluate, mae, p_value, split, SplitParams};
use esg_core::models::tree::{RegressionTree, TreeParams};
use esg_core::models::{
    self, BoostParams, ForestParams, Hyperparams, KnnParams, ModelArtifact, ModelKind, ModelParams,
    SvrParams, Weighting,
};
use esg_core::preprocess::{clean_text, tokenize};
use esg_core::relevance::is_relevant;
use esg_core::sentiment::{score_batch, score_document, Lexicon, ScoreMode, ScoredDocument};
use esg_core::synth::{self, SynthParams};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn significance() -> Check {
    let cases = [
        (0.261, 0.0372),
        (0.183, 0.148),
        (0.160, 0.207),
        (0.132, 0.298),
    ];
    let mut worst: f64 = 0.0;
    for (r, want) in cases {
        let got = p_value(r, 64).map_err(|e| e.to_string())?;
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= 0.001, || {
            format!("p({r}, 64) = {got}, want {want}")
        })?;
    }
    Ok(format!("4 pairs at n=64, max |error| {worst:.2e}"))
}

fn split_sizes() -> Check {
    let companies: Vec<String> = (0..320).map(|i| format!("company-{i:03}")).collect();
    for seed in [0u64, 1, 42, 2024] {
        let a = split(&companies, 0.2, seed).map_err(|e| e.to_string())?;
        let b = split(&companies, 0.2, seed).map_err(|e| e.to_string())?;
        ensure(a.train.len() == 256 && a.test.len() == 64, || {
            format!("seed {seed}: {}/{}", a.train.len(), a.test.len())
        })?;
        ensure(a == b, || format!("seed {seed}: split not deterministic"))?;
    }
    Ok("256/64 for 4 seeds, identical on repeat".into())
}

fn small_int_instance(rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = rng.gen_range(2..=50);
    let p = rng.gen_range(1..=5);
    let levels = rng.gen_range(2..=8);
    let x = (0..n)
        .map(|_| (0..p).map(|_| rng.gen_range(0..levels) as f64).collect())
        .collect();
    let y = (0..n).map(|_| rng.gen_range(0..=20) as f64).collect();
    (x, y)
}

fn regression_oracles() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // (a) depth-1 tree against exhaustive search
    let stump = TreeParams {
        max_depth: Some(1),
        min_samples_leaf: 1,
        max_features: None,
    };
    let mut splits = 0;
    for case in 0..200 {
        let (x, y) = small_int_instance(&mut rng);
        let rows: Vec<usize> = (0..y.len()).collect();
        let tree = RegressionTree::fit(&x, &y, &rows, &stump, &mut rng);
        let root = &tree.nodes[0];
        match (common::exhaustive_split(&x, &y), root.feature) {
            (None, None) => {}
            (Some((f, t, _)), Some(got_f)) => {
                splits += 1;
                ensure(got_f == f && root.threshold == t, || {
                    format!(
                        "case {case}: split ({got_f}, {}) vs oracle ({f}, {t})",
                        root.threshold
                    )
                })?;
                let (lm, rm) = common::side_means(&x, &y, f, t);
                let l = tree.nodes[root.left].value;
                let r = tree.nodes[root.right].value;
                ensure((l - lm).abs() <= 1e-12 && (r - rm).abs() <= 1e-12, || {
                    format!("case {case}: leaves ({l}, {r}) vs ({lm}, {rm})")
                })?;
            }
            (want, got) => {
                return Err(format!(
                    "case {case}: oracle {want:?}, tree split feature {got:?}"
                ))
            }
        }
    }

    // (b) knn against brute-force ranking
    for case in 0..100 {
        let n = rng.gen_range(3..=40);
        let p = rng.gen_range(1..=5);
        let mut rows: Vec<(Vec<f64>, f64)> = (0..n)
            .map(|_| {
                (
                    (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                    rng.gen_range(0.0..100.0),
                )
            })
            .collect();
        // hand the model rows already in its canonical order so that both
        // sides accumulate sums in the same sequence
        rows.sort_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.1.total_cmp(&b.1))
        });
        let (x, y): (Vec<Vec<f64>>, Vec<f64>) = rows.into_iter().unzip();
        let k = rng.gen_range(1..=n.min(7));
        let hp = Hyperparams::new(
            ModelParams::Knn(KnnParams {
                k,
                weighting: Weighting::Uniform,
            }),
            0,
        );
        let names: Vec<String> = (0..p).map(|j| format!("f{j}")).collect();
        let model = models::train(&x, &y, &hp, &names).map_err(|e| e.to_string())?;
        for _ in 0..5 {
            let q: Vec<f64> = (0..p).map(|_| rng.gen_range(-1.2..1.2)).collect();
            let got = model.predict(&q).map_err(|e| e.to_string())?;
            let want = common::knn_predict(&x, &y, k, &q);
            ensure(got == want, || format!("knn case {case}: {got} vs {want}"))?;
        }
    }

    // (c) memorization on distinct rows
    let mut worst_gbt: f64 = 0.0;
    for case in 0..50 {
        let n = rng.gen_range(5..=60);
        let p = rng.gen_range(1..=4);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..p).map(|_| rng.gen_range(0.0..1.0)).collect())
            .collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..100.0)).collect();
        let names: Vec<String> = (0..p).map(|j| format!("f{j}")).collect();
        let rf = Hyperparams::new(
            ModelParams::RandomForest(ForestParams {
                n_trees: 1,
                min_samples_leaf: 1,
                features_per_split: Some(p),
                bootstrap: false,
                max_depth: None,
            }),
            case,
        );
        let gbt = Hyperparams::new(
            ModelParams::Gbt(BoostParams {
                n_stages: 1,
                max_depth: None,
                shrinkage: 1.0,
                min_samples_leaf: 1,
            }),
            case,
        );
        for (hp, tol) in [(rf, 0.0), (gbt, 1e-9)] {
            let m = models::train(&x, &y, &hp, &names).map_err(|e| e.to_string())?;
            let pred: Vec<f64> = x.iter().map(|r| m.predict(r).unwrap()).collect();
            let err = mae(&y, &pred).map_err(|e| e.to_string())?;
            if hp.kind() == ModelKind::Gbt {
                worst_gbt = worst_gbt.max(err);
            }
            ensure(err <= tol, || {
                format!("{} case {case}: training MAE {err}", hp.kind())
            })?;
        }
    }
    Ok(format!(
        "200 stumps ({splits} split) exact; 100 knn instances exact; RF MAE 0, GBT MAE <= {worst_gbt:.1e}"
    ))
}

fn synthetic_end_to_end() -> Check {
    let taxonomy = KeywordTaxonomy::default();
    let params = SynthParams::default();
    let data = synth::generate(&params, &taxonomy);
    let lexicon = Lexicon::seed();
    let profiles: BTreeMap<String, CompanyProfile> = data
        .profiles
        .iter()
        .map(|p| (p.canonical_name.clone(), p.clone()))
        .collect();
    let scored = score_batch(&data.documents, &lexicon, &profiles, &taxonomy, 0)
        .map_err(|e| e.to_string())?;
    let matrix = build_feature_matrix(&scored, &taxonomy, 5, FeatureLayout::Pooled)
        .map_err(|e| e.to_string())?;
    ensure(matrix.n_features() == 20, || {
        format!("{} features", matrix.n_features())
    })?;
    let split = SplitParams {
        test_fraction: 0.2,
        seed: 42,
    };
    let mut summary = Vec::new();
    for kind in ModelKind::ALL {
        let report = evaluate(
            &Hyperparams::defaults(kind, 42),
            &matrix,
            &data.ratings,
            split,
        )
        .map_err(|e| e.to_string())?;
        let m = &report.metrics;
        let r = m.pearson_r.unwrap_or(f64::NAN);
        summary.push(format!("{kind} MAE {:.2} r {r:.3}", m.mae));
        ensure(m.mae <= 20.0, || format!("{kind}: MAE {} > 20", m.mae))?;
        if kind == ModelKind::RandomForest {
            ensure(r >= 0.8, || format!("random forest r {r} < 0.8"))?;
            ensure(m.mae <= 10.0, || {
                format!("random forest MAE {} > 10", m.mae)
            })?;
        }
    }
    Ok(format!(
        "{} companies, holdout {}: {}",
        matrix.n_rows(),
        (0.2 * matrix.n_rows() as f64).round(),
        summary.join("; ")
    ))
}

fn apple() -> CompanyProfile {
    serde_json::from_str(
        r#"{"canonical_name": "Apple", "aliases": ["Apple", "AAPL"], "ambiguous_aliases": ["Apple"],
            "sector": "technology", "blocklist_nouns": ["trees", "pie", "juice"]}"#,
    )
    .expect("profile")
}

fn nlp_rules() -> Check {
    let taxonomy = KeywordTaxonomy::default();
    let profile = apple();
    let orchard = Document::new(
        "a1",
        "Apple",
        Network::Twitter,
        "climate",
        "Spring climate is the best time to grow apple trees.",
    );
    let pledge = Document::new(
        "a2",
        "Apple",
        Network::Twitter,
        "climate",
        "Apple is pouring 500 million dollars into initiatives for climate change",
    );
    ensure(!is_relevant(&orchard, &profile, &taxonomy).relevant, || {
        "orchard sentence kept".into()
    })?;
    ensure(is_relevant(&pledge, &profile, &taxonomy).relevant, || {
        "pledge sentence dropped".into()
    })?;

    let lex = Lexicon::seed();
    let mut own = Document::new(
        "a3",
        "Apple",
        Network::Linkedin,
        "carbon",
        "Apple leads on carbon, great work team",
    );
    own.author_affiliation = Some("Apple Inc".into());
    let r = score_document(&own, &lex, &profile, &taxonomy);
    ensure(
        !r.relevant && r.mode == ScoreMode::ExcludedSelfReport,
        || format!("self post scored as {r:?}"),
    )?;

    let mut linked = Document::new(
        "a4",
        "Apple",
        Network::Twitter,
        "carbon",
        "Apple carbon news https://example.com/a",
    );
    linked.link_url = Some("https://example.com/a".into());
    linked.resolved_link_text = Some("Apple cut carbon emissions.\n\nThe results were excellent.\n\nApple called it a great success.".into());
    let r = score_document(&linked, &lex, &profile, &taxonomy);
    ensure(r.mode == ScoreMode::LongArticle && r.relevant, || {
        format!("linked post scored as {r:?}")
    })?;

    let data = synth::generate(
        &SynthParams {
            n_companies: 30,
            docs_per_keyword: 3,
            ..SynthParams::default()
        },
        &taxonomy,
    );
    let profiles: BTreeMap<String, CompanyProfile> = data
        .profiles
        .iter()
        .map(|p| (p.canonical_name.clone(), p.clone()))
        .collect();
    let serial: Vec<ScoredDocument> = data
        .documents
        .iter()
        .map(|d| ScoredDocument {
            id: d.id.clone(),
            company: d.company.clone(),
            network: d.network,
            keyword: d.keyword.clone(),
            result: score_document(d, &lex, &profiles[&d.company], &taxonomy),
        })
        .collect();
    let bytes = |s: &[ScoredDocument]| -> Vec<u8> {
        s.iter()
            .flat_map(|d| serde_json::to_vec(d).unwrap())
            .collect()
    };
    let want = bytes(&serial);
    for workers in [1, 2, 3, 8] {
        let got = score_batch(&data.documents, &lex, &profiles, &taxonomy, workers)
            .map_err(|e| e.to_string())?;
        ensure(bytes(&got) == want, || {
            format!("batch at {workers} workers differs from serial")
        })?;
    }
    Ok(format!(
        "orchard irrelevant, pledge relevant, self post excluded, link rerouted, {} docs identical at 1/2/3/8 workers",
        data.documents.len()
    ))
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    const PIECES: &[&str] = &[
        "Acme",
        "carbon",
        " ",
        "  ",
        "\n",
        "\t",
        "@user_1",
        "@",
        "http://x.co/a?b=1",
        "https://t.co/Z9",
        "www.example.org",
        "#ESG",
        "!",
        "?",
        ".",
        ",",
        "'",
        "\"",
        "-",
        "&amp;",
        "é",
        "日本",
        "🙂",
        "$5",
        "100%",
        "not",
        "very",
        "good",
        "(",
        ")",
        "/",
        ":",
        ";",
        "__",
    ];
    let n = rng.gen_range(0..25);
    (0..n).map(|_| *PIECES.choose(rng).unwrap()).collect()
}

fn random_model(rng: &mut ChaCha8Rng, case: u64) -> ModelArtifact {
    let n = rng.gen_range(6..30);
    let p = rng.gen_range(1..6);
    let x: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..100.0)).collect();
    let names: Vec<String> = (0..p).map(|j| format!("f{j}")).collect();
    let params = match case % 4 {
        0 => ModelParams::RandomForest(ForestParams {
            n_trees: rng.gen_range(1..8),
            ..ForestParams::default()
        }),
        1 => ModelParams::Gbt(BoostParams {
            n_stages: rng.gen_range(1..20),
            ..BoostParams::default()
        }),
        2 => ModelParams::Knn(KnnParams {
            k: rng.gen_range(1..=5),
            weighting: if rng.gen_bool(0.5) {
                Weighting::Uniform
            } else {
                Weighting::Distance
            },
        }),
        _ => ModelParams::Svr(SvrParams {
            epochs: rng.gen_range(1..50),
            ..SvrParams::default()
        }),
    };
    models::train(&x, &y, &Hyperparams::new(params, case), &names).expect("train")
}

fn numerical_hygiene() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // imputation
    for case in 0..50 {
        let n = rng.gen_range(5..60);
        let p = rng.gen_range(1..8);
        let mut rows: Vec<Vec<Option<f64>>> = (0..n)
            .map(|_| {
                (0..p)
                    .map(|_| (!rng.gen_bool(0.2)).then(|| rng.gen_range(-1.0..1.0)))
                    .collect()
            })
            .collect();
        for j in 0..p {
            if rows.iter().all(|r| r[j].is_none()) {
                rows[0][j] = Some(0.5);
            }
        }
        let names: Vec<String> = (0..p).map(|j| format!("k{j}")).collect();
        let (values, mask) = impute(&rows, &names).map_err(|e| e.to_string())?;
        let means = common::observed_means(&rows, p);
        for i in 0..n {
            for j in 0..p {
                let want = rows[i][j].unwrap_or(means[j]);
                ensure(
                    values[i][j] == want && mask[i][j] == rows[i][j].is_none(),
                    || {
                        format!(
                            "impute case {case} cell ({i},{j}): {} vs {want}",
                            values[i][j]
                        )
                    },
                )?;
            }
        }
    }
    // clean_text idempotence
    for _ in 0..1000 {
        let s = random_text(&mut rng);
        let once = clean_text(&s).cleaned;
        let twice = clean_text(&once).cleaned;
        ensure(once == twice, || {
            format!("not idempotent on {s:?}: {once:?} -> {twice:?}")
        })?;
    }
    // lexicon normalization
    let lex = Lexicon::seed();
    let mut vocab: Vec<String> = lex.valences().map(|(t, _)| t.to_string()).collect();
    vocab.extend(
        [
            "not",
            "never",
            "very",
            "extremely",
            "the",
            "company",
            "carbon",
        ]
        .map(String::from),
    );
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..30);
        let tokens: Vec<String> = (0..n)
            .map(|_| vocab.choose(&mut rng).unwrap().clone())
            .collect();
        let got = esg_core::sentiment::SentimentScorer::score_tokens(&lex, &tokens).polarity;
        let want = common::lexicon_polarity(&lex, &tokens);
        worst = worst.max((got - want).abs());
        ensure((got - want).abs() <= 1e-12, || {
            format!("{tokens:?}: {got} vs {want}")
        })?;
    }
    let tokens = tokenize("good");
    let s = lex.valence("good").unwrap();
    ensure(
        (esg_core::sentiment::SentimentScorer::score_tokens(&lex, &tokens).polarity
            - s / (s * s + 15.0).sqrt())
        .abs()
            <= 1e-12,
        || "single token normalization".into(),
    )?;
    // model round trip
    for case in 0..100u64 {
        let m = random_model(&mut rng, case);
        let json = m.to_json();
        let back = ModelArtifact::from_json(&json).map_err(|e| e.to_string())?;
        ensure(back == m && back.to_json() == json, || {
            format!("model {case} ({}) changed on round trip", m.kind)
        })?;
    }
    Ok(format!(
        "imputation exact on 50 masked matrices; 1000 strings idempotent; normalization max error {worst:.1e}; 100 models round-trip"
    ))
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() {
    // ignore libtest flags such as --nocapture passed through by cargo
    let criteria = [
        Criterion {
            id: "1",
            name: "significance reproduction",
            limit: Duration::from_secs(1),
            run: significance,
        },
        Criterion {
            id: "2",
            name: "split reproduction",
            limit: Duration::from_secs(30),
            run: split_sizes,
        },
        Criterion {
            id: "3",
            name: "regression oracles",
            limit: Duration::from_secs(30),
            run: regression_oracles,
        },
        Criterion {
            id: "4",
            name: "synthetic end-to-end",
            limit: Duration::from_secs(120),
            run: synthetic_end_to_end,
        },
        Criterion {
            id: "5",
            name: "NLP determinism and rules",
            limit: Duration::from_secs(60),
            run: nlp_rules,
        },
        Criterion {
            id: "6",
            name: "numerical hygiene",
            limit: Duration::from_secs(60),
            run: numerical_hygiene,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {:?}", c.limit))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS criterion {} {} ({elapsed:.2?}): {detail}",
                c.id, c.name
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "FAIL criterion {} {} ({elapsed:.2?}): {reason}",
                    c.id, c.name
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
