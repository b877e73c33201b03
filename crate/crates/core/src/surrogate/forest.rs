use alloc::vec::Vec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Dataset, RegressionTree, Surrogate, SurrogateError, SurrogateFamily};
use crate::ObjectivePoint;

/// Bagged fully grown regression trees, one ensemble per objective.
#[derive(Debug, Clone, PartialEq)]
pub struct BaggedTrees {
    pub trees: usize,
    /// Resample the training rows with replacement for each tree.
    pub bootstrap: bool,
}

impl Default for BaggedTrees {
    fn default() -> Self {
        Self {
            trees: 100,
            bootstrap: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForestModel {
    risk: Vec<RegressionTree>,
    ret: Vec<RegressionTree>,
    tree_seeds: Vec<u64>,
    dimension: usize,
    training_rows: usize,
}

impl ForestModel {
    pub fn tree_seeds(&self) -> &[u64] {
        &self.tree_seeds
    }

    pub fn training_rows(&self) -> usize {
        self.training_rows
    }
}

impl SurrogateFamily for BaggedTrees {
    type Model = ForestModel;

    fn fit(&self, data: &Dataset, seed: u64) -> Result<ForestModel, SurrogateError> {
        let n = data.len();
        if n < 2 {
            return Err(SurrogateError::TooFewRows(n, 2));
        }
        let trees = self.trees.max(1);
        let x: Vec<&[f64]> = data.inputs().iter().map(|c| c.genes()).collect();
        let y_risk: Vec<f64> = data.targets().iter().map(ObjectivePoint::risk_pct).collect();
        let y_ret: Vec<f64> = data.targets().iter().map(ObjectivePoint::return_pct).collect();

        let mut master = ChaCha8Rng::seed_from_u64(seed);
        let tree_seeds: Vec<u64> = (0..trees).map(|_| master.random()).collect();
        let all: Vec<usize> = (0..n).collect();
        let mut risk = Vec::with_capacity(trees);
        let mut ret = Vec::with_capacity(trees);
        let mut sample = Vec::with_capacity(n);
        for &s in &tree_seeds {
            if self.bootstrap {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                sample.clear();
                sample.extend((0..n).map(|_| rng.random_range(0..n)));
            } else {
                sample.clone_from(&all);
            }
            risk.push(RegressionTree::fit(&x, &y_risk, &sample));
            ret.push(RegressionTree::fit(&x, &y_ret, &sample));
        }
        Ok(ForestModel {
            risk,
            ret,
            tree_seeds,
            dimension: data.dimension(),
            training_rows: n,
        })
    }
}

impl Surrogate for ForestModel {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn predict_one(&self, genes: &[f64]) -> Result<ObjectivePoint, SurrogateError> {
        if genes.len() != self.dimension {
            return Err(SurrogateError::DimensionMismatch {
                expected: self.dimension,
                got: genes.len(),
            });
        }
        let k = self.risk.len() as f64;
        let risk = self.risk.iter().map(|t| t.predict(genes)).sum::<f64>() / k;
        let ret = self.ret.iter().map(|t| t.predict(genes)).sum::<f64>() / k;
        ObjectivePoint::new(risk, ret).map_err(|_| SurrogateError::NonFinitePrediction)
    }
}
