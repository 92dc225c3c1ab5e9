use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SvrParams {
    /// Half-width of the zero-loss tube, in score points.
    pub epsilon: f64,
    pub l2_lambda: f64,
    pub epochs: usize,
}

impl Default for SvrParams {
    fn default() -> Self {
        SvrParams {
            epsilon: 1.0,
            l2_lambda: 0.01,
            epochs: 500,
        }
    }
}

/// Linear epsilon-insensitive regressor on standardized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearSvr {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearSvr {
    pub fn predict(&self, z: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(z).map(|(w, v)| w * v).sum::<f64>()
    }

    /// `mean(max(0, |y - f(z)| - epsilon)) + lambda/2 * |w|^2`; the bias is
    /// not penalized.
    pub fn objective(&self, z: &[Vec<f64>], y: &[f64], params: &SvrParams) -> f64 {
        let loss: f64 = z
            .iter()
            .zip(y)
            .map(|(row, t)| ((t - self.predict(row)).abs() - params.epsilon).max(0.0))
            .sum::<f64>()
            / y.len() as f64;
        let norm: f64 = self.weights.iter().map(|w| w * w).sum();
        loss + 0.5 * params.l2_lambda * norm
    }

    /// Full-batch subgradient descent with step `1 / (lambda * t)` at epoch
    /// `t`. Subgradient steps are not descent steps, so the iterate with the
    /// lowest objective seen so far is kept; the returned history holds that
    /// running minimum after each epoch.
    pub fn fit(z: &[Vec<f64>], y: &[f64], params: &SvrParams) -> (Self, Vec<f64>) {
        let n = y.len();
        let p = z.first().map_or(0, Vec::len);
        let mut sorted = y.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            sorted[n / 2 - 1] + (sorted[n / 2] - sorted[n / 2 - 1]) / 2.0
        };
        let mut current = LinearSvr {
            weights: vec![0.0; p],
            bias: median,
        };
        let mut best = current.clone();
        let mut best_obj = best.objective(z, y, params);
        let mut history = Vec::with_capacity(params.epochs);
        for t in 1..=params.epochs {
            let mut grad_w = vec![0.0; p];
            let mut grad_b = 0.0;
            for (row, target) in z.iter().zip(y) {
                let r = target - current.predict(row);
                if r.abs() > params.epsilon {
                    let s = -r.signum();
                    grad_b += s;
                    for (g, v) in grad_w.iter_mut().zip(row) {
                        *g += s * v;
                    }
                }
            }
            let step = 1.0 / (params.l2_lambda * t as f64);
            for (w, g) in current.weights.iter_mut().zip(&grad_w) {
                *w -= step * (params.l2_lambda * *w + g / n as f64);
            }
            current.bias -= step * grad_b / n as f64;
            let obj = current.objective(z, y, params);
            if obj < best_obj {
                best_obj = obj;
                best = current.clone();
            }
            history.push(best_obj);
        }
        (best, history)
    }
}
