use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf(f64),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Fully grown CART regression tree (squared-error splits, one sample per
/// leaf unless targets or inputs are tied).
#[derive(Debug, Clone, PartialEq)]
pub struct RegressionTree {
    nodes: Vec<Node>,
}

impl RegressionTree {
    /// Fits on the rows `sample` of `x`/`y`. Repeated indices (bootstrap
    /// draws) act as sample weights. `sample` must be nonempty.
    pub fn fit(x: &[&[f64]], y: &[f64], sample: &[usize]) -> Self {
        assert!(!sample.is_empty(), "empty training sample");
        let mut tree = Self { nodes: Vec::new() };
        let mut idx = sample.to_vec();
        let d = x[sample[0]].len();
        tree.grow(x, y, &mut idx, d);
        tree
    }

    fn grow(&mut self, x: &[&[f64]], y: &[f64], idx: &mut [usize], d: usize) -> usize {
        let id = self.nodes.len();
        let n = idx.len() as f64;
        let mean = idx.iter().map(|&i| y[i]).sum::<f64>() / n;
        self.nodes.push(Node::Leaf(mean));
        if idx.len() < 2 || idx.iter().all(|&i| y[i] == y[idx[0]]) {
            return id;
        }

        let total: f64 = idx.iter().map(|&i| y[i]).sum();
        let mut best: Option<(f64, usize, f64)> = None;
        for f in 0..d {
            idx.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]));
            let mut left_sum = 0.0;
            for k in 0..idx.len() - 1 {
                left_sum += y[idx[k]];
                let (lo, hi) = (x[idx[k]][f], x[idx[k + 1]][f]);
                if lo == hi {
                    continue;
                }
                let nl = (k + 1) as f64;
                let nr = n - nl;
                let right_sum = total - left_sum;
                // maximizing this is equivalent to minimizing the child SSE
                let gain = left_sum * left_sum / nl + right_sum * right_sum / nr;
                if best.is_none_or(|(g, _, _)| gain > g) {
                    let mut thr = lo + (hi - lo) / 2.0;
                    if thr >= hi {
                        thr = lo;
                    }
                    best = Some((gain, f, thr));
                }
            }
        }
        let Some((_, feature, threshold)) = best else {
            return id;
        };
        idx.sort_by(|&a, &b| x[a][feature].total_cmp(&x[b][feature]));
        let cut = idx.partition_point(|&i| x[i][feature] <= threshold);
        let (l, r) = idx.split_at_mut(cut);
        let left = self.grow(x, y, l, d);
        let right = self.grow(x, y, r, d);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf(v) => return v,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if x[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}
