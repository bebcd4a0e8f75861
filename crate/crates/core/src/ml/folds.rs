use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Dataset;
use crate::error::{validation, Result};

/// Assignment of every instance to one of `k` folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignment: Vec<usize>,
}

impl FoldPlan {
    /// Training and held-out indices for fold `fold`, each ascending.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut test = Vec::new();
        for (i, &f) in self.assignment.iter().enumerate() {
            if f == fold {
                test.push(i);
            } else {
                train.push(i);
            }
        }
        (train, test)
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Shuffles with `seed`, groups instances by class (in class order), then
/// deals them to folds round-robin with one counter shared by all classes.
/// Fold sizes and per-class counts per fold each differ by at most one.
pub fn stratified_folds(dataset: &Dataset, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(validation("cross-validation needs k >= 2"));
    }
    if k > dataset.len() {
        return Err(validation(format!("k = {k} exceeds the {} instances", dataset.len())));
    }
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    // stable sort keeps the shuffled order within each class
    order.sort_by_key(|&i| dataset.label(i));

    let mut assignment = vec![0; dataset.len()];
    for (pos, &i) in order.iter().enumerate() {
        assignment[i] = pos % k;
    }
    Ok(FoldPlan { k, assignment })
}
