//! Greedy variance-reduction regression trees stored as flat node arrays.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One entry of a tree's node array. Internal nodes send `x[feature] <=
/// threshold` to `left`, everything else to `right`. Leaves have no
/// feature and zero child indices. `value` is the training mean of the
/// samples that reached the node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub feature: Option<usize>,
    pub threshold: f64,
    pub left: usize,
    pub right: usize,
    pub value: f64,
}

impl Node {
    fn leaf(value: f64) -> Self {
        Node {
            feature: None,
            threshold: 0.0,
            left: 0,
            right: 0,
            value,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.feature.is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
    /// Features examined per split; `None` examines all of them.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_leaf: 1,
            max_features: None,
        }
    }
}

/// Threshold between two adjacent distinct sorted values.
pub(crate) fn midpoint(lo: f64, hi: f64) -> f64 {
    let mid = lo + (hi - lo) / 2.0;
    if mid < hi {
        mid
    } else {
        lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    /// `sum_l^2 / n_l + sum_r^2 / n_r`; maximizing it minimizes child SSE.
    pub score: f64,
}

/// Best split of `rows` over the `features` (scanned in ascending order).
/// Ties keep the earliest feature and the lowest threshold.
pub fn best_split(
    x: &[Vec<f64>],
    y: &[f64],
    rows: &[usize],
    features: &[usize],
    min_samples_leaf: usize,
) -> Option<Split> {
    let n = rows.len();
    let min_leaf = min_samples_leaf.max(1);
    if n < 2 * min_leaf {
        return None;
    }
    let total: f64 = rows.iter().map(|&r| y[r]).sum();
    let mut best: Option<Split> = None;
    let mut order = rows.to_vec();
    for &f in features {
        order.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]).then(a.cmp(&b)));
        let mut left_sum = 0.0;
        for i in 1..n {
            left_sum += y[order[i - 1]];
            let lo = x[order[i - 1]][f];
            let hi = x[order[i]][f];
            if i < min_leaf || n - i < min_leaf || lo >= hi {
                continue;
            }
            let right_sum = total - left_sum;
            let score = left_sum * left_sum / i as f64 + right_sum * right_sum / (n - i) as f64;
            if best.is_none_or(|b| score > b.score) {
                best = Some(Split {
                    feature: f,
                    threshold: midpoint(lo, hi),
                    score,
                });
            }
        }
    }
    best
}

fn node_value(y: &[f64], rows: &[usize]) -> (f64, bool) {
    let first = y[rows[0]];
    if rows.iter().all(|&r| y[r] == first) {
        return (first, true);
    }
    let sum: f64 = rows.iter().map(|&r| y[r]).sum();
    (sum / rows.len() as f64, false)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegressionTree {
    pub nodes: Vec<Node>,
}

impl RegressionTree {
    /// Grows a tree on the multiset of row indices `rows` (repeats allowed,
    /// as produced by bootstrap sampling). Nodes keep splitting while their
    /// targets differ and a split honoring the leaf size and depth limits
    /// exists.
    pub fn fit<R: Rng + ?Sized>(
        x: &[Vec<f64>],
        y: &[f64],
        rows: &[usize],
        params: &TreeParams,
        rng: &mut R,
    ) -> Self {
        assert!(!rows.is_empty(), "cannot grow a tree on zero rows");
        let n_features = x[rows[0]].len();
        let per_split = params
            .max_features
            .unwrap_or(n_features)
            .clamp(1, n_features.max(1));
        let mut nodes = Vec::new();
        // (node index, rows, depth)
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        let (value, _) = node_value(y, rows);
        nodes.push(Node::leaf(value));
        stack.push((0, rows.to_vec(), 0));
        while let Some((idx, node_rows, depth)) = stack.pop() {
            let (_, pure) = node_value(y, &node_rows);
            if pure || params.max_depth.is_some_and(|d| depth >= d) || n_features == 0 {
                continue;
            }
            let features: Vec<usize> = if per_split >= n_features {
                (0..n_features).collect()
            } else {
                let mut f = sample(rng, n_features, per_split).into_vec();
                f.sort_unstable();
                f
            };
            let Some(split) = best_split(x, y, &node_rows, &features, params.min_samples_leaf)
            else {
                continue;
            };
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = node_rows
                .iter()
                .partition(|&&r| x[r][split.feature] <= split.threshold);
            let left = nodes.len();
            nodes.push(Node::leaf(node_value(y, &left_rows).0));
            let right = nodes.len();
            nodes.push(Node::leaf(node_value(y, &right_rows).0));
            let node = &mut nodes[idx];
            node.feature = Some(split.feature);
            node.threshold = split.threshold;
            node.left = left;
            node.right = right;
            stack.push((right, right_rows, depth + 1));
            stack.push((left, left_rows, depth + 1));
        }
        RegressionTree { nodes }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            let node = &self.nodes[i];
            match node.feature {
                None => return node.value,
                Some(f) => {
                    i = if x[f] <= node.threshold {
                        node.left
                    } else {
                        node.right
                    }
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            let n = &nodes[i];
            if n.is_leaf() {
                0
            } else {
                1 + walk(nodes, n.left).max(walk(nodes, n.right))
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Checks that the node array encodes one binary tree rooted at 0:
    /// children come after their parent, every non-root node has exactly
    /// one parent, and split features are in range.
    pub fn validate(&self, n_features: usize) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("tree has no nodes".into());
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if !node.value.is_finite() || !node.threshold.is_finite() {
                return Err(format!("node {i} holds a non-finite number"));
            }
            let Some(f) = node.feature else {
                if node.left != 0 || node.right != 0 {
                    return Err(format!("leaf {i} has children"));
                }
                continue;
            };
            if f >= n_features {
                return Err(format!("node {i} splits on feature {f} of {n_features}"));
            }
            for child in [node.left, node.right] {
                if child <= i || child >= self.nodes.len() {
                    return Err(format!("node {i} has out-of-order child {child}"));
                }
                parents[child] += 1;
            }
            if node.left == node.right {
                return Err(format!("node {i} has identical children"));
            }
        }
        if let Some(i) = parents.iter().skip(1).position(|&p| p != 1) {
            return Err(format!("node {} has {} parents", i + 1, parents[i + 1]));
        }
        Ok(())
    }
}
