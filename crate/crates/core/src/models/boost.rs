use serde::{Deserialize, Serialize};

use super::tree::{RegressionTree, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoostParams {
    pub n_stages: usize,
    /// `None` grows each stage until its leaves are pure.
    pub max_depth: Option<usize>,
    pub shrinkage: f64,
    pub min_samples_leaf: usize,
}

impl Default for BoostParams {
    fn default() -> Self {
        BoostParams {
            n_stages: 300,
            max_depth: Some(3),
            shrinkage: 0.05,
            min_samples_leaf: 1,
        }
    }
}

/// Squared-loss gradient boosting: start from the target mean and add
/// `shrinkage * tree` where each tree fits the current residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostedTrees {
    pub init: f64,
    pub shrinkage: f64,
    pub stages: Vec<RegressionTree>,
}

impl BoostedTrees {
    pub fn fit(x: &[Vec<f64>], y: &[f64], params: &BoostParams) -> Self {
        let n = y.len();
        let init = y.iter().sum::<f64>() / n as f64;
        let mut fitted = vec![init; n];
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_samples_leaf: params.min_samples_leaf,
            max_features: None,
        };
        let rows: Vec<usize> = (0..n).collect();
        // Stage trees see every feature, so the generator is never consulted.
        let mut rng = rand::rngs::mock::StepRng::new(0, 1);
        let mut stages = Vec::with_capacity(params.n_stages);
        for _ in 0..params.n_stages {
            let residuals: Vec<f64> = y.iter().zip(&fitted).map(|(t, f)| t - f).collect();
            let tree = RegressionTree::fit(x, &residuals, &rows, &tree_params, &mut rng);
            for (f, row) in fitted.iter_mut().zip(x) {
                *f += params.shrinkage * tree.predict(row);
            }
            stages.push(tree);
        }
        BoostedTrees {
            init,
            shrinkage: params.shrinkage,
            stages,
        }
    }

    /// Output using only the first `n_stages` trees.
    pub fn predict_staged(&self, x: &[f64], n_stages: usize) -> f64 {
        let mut out = self.init;
        for tree in self.stages.iter().take(n_stages) {
            out += self.shrinkage * tree.predict(x);
        }
        out
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        self.predict_staged(x, self.stages.len())
    }
}
