use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::argmax_usize;
use super::tree::{Criterion, DecisionTree, FeatureChoice, Grower};
use super::Dataset;
use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    /// Features examined at each node; `None` means `floor(log2(F) + 1)`.
    pub features_per_split: Option<usize>,
    pub bootstrap: bool,
    pub min_leaf: usize,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self { n_trees: 100, features_per_split: None, bootstrap: true, min_leaf: 2, seed: 1 }
    }
}

pub fn default_features_per_split(n_features: usize) -> usize {
    ((n_features as f64).log2() + 1.0).floor() as usize
}

/// Bagged ensemble of unpruned gain-ratio trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    n_classes: usize,
    trees: Vec<DecisionTree>,
}

/// Per-tree seed derived from the master seed, independent of scheduling.
fn tree_seed(seed: u64, tree: usize) -> u64 {
    let mut z = seed.wrapping_add((tree as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn train_random_forest(dataset: &Dataset, params: ForestParams) -> Result<ForestModel> {
    dataset.require_non_empty()?;
    if params.n_trees == 0 {
        return Err(validation("a forest needs at least one tree"));
    }
    if params.min_leaf == 0 {
        return Err(validation("min_leaf must be at least 1"));
    }
    let nf = dataset.n_features();
    let per_split = params.features_per_split.unwrap_or_else(|| default_features_per_split(nf));
    if per_split == 0 {
        return Err(validation("features_per_split must be at least 1"));
    }
    let n = dataset.len();

    let trees = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(tree_seed(params.seed, t));
            let mut sample: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            sample.sort_unstable();
            let features = if per_split >= nf {
                FeatureChoice::All
            } else {
                FeatureChoice::Random { per_split, rng }
            };
            let mut grower =
                Grower { data: dataset, criterion: Criterion::GainRatio, min_leaf: params.min_leaf, features };
            DecisionTree::new(dataset.n_classes(), grower.grow(&sample))
        })
        .collect();
    Ok(ForestModel { n_classes: dataset.n_classes(), trees })
}

impl ForestModel {
    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn votes(&self, x: &[f64]) -> Vec<usize> {
        let mut votes = vec![0; self.n_classes];
        for t in &self.trees {
            votes[t.predict(x)] += 1;
        }
        votes
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax_usize(&self.votes(x))
    }
}
