use serde::{Deserialize, Serialize};

use super::standardize::Standardizer;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    #[default]
    Uniform,
    /// Inverse-distance weights; exact matches take all the weight.
    Distance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KnnParams {
    pub k: usize,
    pub weighting: Weighting,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams {
            k: 5,
            weighting: Weighting::Uniform,
        }
    }
}

/// Memorized training rows (raw feature values) and targets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Neighbors {
    pub k: usize,
    pub weighting: Weighting,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

impl Neighbors {
    /// Training rows ranked by squared standardized distance to `query`,
    /// ties broken by row position.
    pub fn ranked(&self, scaler: &Standardizer, query: &[f64]) -> Vec<(f64, usize)> {
        let q = scaler.transform(query);
        let mut dists: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let z = scaler.transform(row);
                let d: f64 = z.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
                (d, i)
            })
            .collect();
        dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dists
    }

    pub fn predict(&self, scaler: &Standardizer, query: &[f64]) -> f64 {
        let ranked = self.ranked(scaler, query);
        let nearest = &ranked[..self.k.min(ranked.len())];
        match self.weighting {
            Weighting::Uniform => {
                nearest.iter().map(|&(_, i)| self.y[i]).sum::<f64>() / nearest.len() as f64
            }
            Weighting::Distance => {
                let exact: Vec<f64> = nearest
                    .iter()
                    .filter(|(d, _)| *d == 0.0)
                    .map(|&(_, i)| self.y[i])
                    .collect();
                if !exact.is_empty() {
                    return exact.iter().sum::<f64>() / exact.len() as f64;
                }
                let (num, den) = nearest.iter().fold((0.0, 0.0), |(num, den), &(d, i)| {
                    let w = 1.0 / d.sqrt();
                    (num + w * self.y[i], den + w)
                });
                num / den
            }
        }
    }
}
