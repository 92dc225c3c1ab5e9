//! Brute-force reference implementations used by the acceptance checks.
//! Each one recomputes a quantity from its definition without reusing the
//! library's code path.

use esg_core::sentiment::Lexicon;

/// Sum of squared deviations from the mean, two-pass.
pub fn sse(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.iter().map(|v| (v - mean) * (v - mean)).sum()
}

/// Best single axis-aligned split by total child SSE, trying every feature
/// and every midpoint between consecutive distinct values. Among splits
/// within `1e-9` of the best, the lowest feature and then the lowest
/// threshold wins. `None` when the targets are constant or no feature
/// varies.
pub fn exhaustive_split(x: &[Vec<f64>], y: &[f64]) -> Option<(usize, f64, f64)> {
    if y.iter().all(|v| *v == y[0]) {
        return None;
    }
    let p = x[0].len();
    let mut candidates = Vec::new();
    for f in 0..p {
        let mut vals: Vec<f64> = x.iter().map(|r| r[f]).collect();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        for w in vals.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let left: Vec<f64> = (0..y.len())
                .filter(|&i| x[i][f] <= t)
                .map(|i| y[i])
                .collect();
            let right: Vec<f64> = (0..y.len())
                .filter(|&i| x[i][f] > t)
                .map(|i| y[i])
                .collect();
            candidates.push((f, t, sse(&left) + sse(&right)));
        }
    }
    let best = candidates.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
    candidates
        .into_iter()
        .find(|c| c.2 <= best + 1e-9 * (1.0 + best.abs()))
}

/// Mean of the targets on each side of a split.
pub fn side_means(x: &[Vec<f64>], y: &[f64], feature: usize, threshold: f64) -> (f64, f64) {
    let (mut ls, mut ln, mut rs, mut rn) = (0.0, 0.0, 0.0, 0.0);
    for (row, t) in x.iter().zip(y) {
        if row[feature] <= threshold {
            ls += t;
            ln += 1.0;
        } else {
            rs += t;
            rn += 1.0;
        }
    }
    (ls / ln, rs / rn)
}

/// Uniform k-nearest-neighbour regression on z-scored features (population
/// standard deviation, zero-variance columns dropped), nearest first with
/// ties by row index.
pub fn knn_predict(x: &[Vec<f64>], y: &[f64], k: usize, query: &[f64]) -> f64 {
    let n = x.len() as f64;
    let p = query.len();
    let mut mean = vec![0.0; p];
    let mut sd = vec![0.0; p];
    for j in 0..p {
        for row in x {
            mean[j] += row[j];
        }
        mean[j] /= n;
        for row in x {
            sd[j] += (row[j] - mean[j]) * (row[j] - mean[j]);
        }
        sd[j] = (sd[j] / n).sqrt();
    }
    let z = |row: &[f64]| -> Vec<f64> {
        (0..p)
            .map(|j| {
                if sd[j] > 0.0 {
                    (row[j] - mean[j]) / sd[j]
                } else {
                    0.0
                }
            })
            .collect()
    };
    let zq = z(query);
    let mut d: Vec<(f64, usize)> = x
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let zr = z(row);
            let mut acc = 0.0;
            for j in 0..p {
                acc += (zr[j] - zq[j]) * (zr[j] - zq[j]);
            }
            (acc, i)
        })
        .collect();
    d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let mut total = 0.0;
    for &(_, i) in &d[..k] {
        total += y[i];
    }
    total / k as f64
}

/// Column means of observed cells.
pub fn observed_means(rows: &[Vec<Option<f64>>], width: usize) -> Vec<f64> {
    (0..width)
        .map(|j| {
            let mut s = 0.0;
            let mut n = 0usize;
            for r in rows {
                if let Some(v) = r[j] {
                    s += v;
                    n += 1;
                }
            }
            s / n as f64
        })
        .collect()
}

/// Lexicon polarity from the scoring rules written out directly.
pub fn lexicon_polarity(lex: &Lexicon, tokens: &[String]) -> f64 {
    let mut s = 0.0;
    for i in 0..tokens.len() {
        let Some(v) = lex.valence(&tokens[i]) else {
            continue;
        };
        let mut v = v;
        if i > 0 {
            if let Some(delta) = lex.intensifier(&tokens[i - 1]) {
                v *= 1.0 + delta;
            }
        }
        if tokens[i.saturating_sub(3)..i]
            .iter()
            .any(|t| lex.is_negator(t))
        {
            v *= -0.75;
        }
        s += v;
    }
    s / (s * s + 15.0).sqrt()
}
