use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dataset::argmax;
use super::tree::{Criterion, DecisionTree, FeatureChoice, Grower, Node};
use super::Dataset;
use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepTreeParams {
    /// Share of the data held out for pruning.
    pub prune_fraction: f64,
    pub min_leaf: usize,
    /// Fold the pruning set's counts back into the node distributions.
    pub backfit: bool,
    pub seed: u64,
}

impl Default for RepTreeParams {
    fn default() -> Self {
        Self { prune_fraction: 1.0 / 3.0, min_leaf: 2, backfit: true, seed: 1 }
    }
}

/// Seeded, class-stratified split into (grow, prune) index sets.
pub fn grow_prune_split(dataset: &Dataset, prune_fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order.sort_by_key(|&i| dataset.label(i));
    let mut grow = Vec::new();
    let mut prune = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let before = (pos as f64 * prune_fraction).floor();
        let after = ((pos + 1) as f64 * prune_fraction).floor();
        if after > before {
            prune.push(i);
        } else {
            grow.push(i);
        }
    }
    grow.sort_unstable();
    prune.sort_unstable();
    (grow, prune)
}

pub fn train_reptree(dataset: &Dataset, params: RepTreeParams) -> Result<DecisionTree> {
    if dataset.len() < 3 {
        return Err(validation("reduced-error pruning needs at least 3 instances"));
    }
    if !(params.prune_fraction > 0.0 && params.prune_fraction < 1.0) {
        return Err(validation("prune_fraction must lie in (0, 1)"));
    }
    let (grow, prune) = grow_prune_split(dataset, params.prune_fraction, params.seed);
    fit_with_split(dataset, &grow, &prune, params)
}

/// Grows on `grow`, then prunes and optionally backfits on `prune`.
pub fn fit_with_split(dataset: &Dataset, grow: &[usize], prune: &[usize], params: RepTreeParams) -> Result<DecisionTree> {
    if grow.is_empty() || prune.is_empty() {
        return Err(validation("grow and prune sets must both be non-empty"));
    }
    if params.min_leaf == 0 {
        return Err(validation("min_leaf must be at least 1"));
    }
    let mut grower =
        Grower { data: dataset, criterion: Criterion::InfoGain, min_leaf: params.min_leaf, features: FeatureChoice::All };
    let mut root = grower.grow(grow);
    reduce_errors(&mut root, dataset, prune);
    if params.backfit {
        for &i in prune {
            backfit(&mut root, &dataset.instances()[i].features, dataset.label(i));
        }
    }
    Ok(DecisionTree::new(dataset.n_classes(), root))
}

fn misclassified(dist: &[f64], dataset: &Dataset, idx: &[usize]) -> usize {
    let predicted = argmax(dist);
    idx.iter().filter(|&&i| dataset.label(i) != predicted).count()
}

/// Bottom-up: a subtree becomes a leaf when the leaf makes no more errors
/// on the pruning instances that reach it. Returns the node's pruning-set
/// errors afterwards.
fn reduce_errors(node: &mut Node, dataset: &Dataset, idx: &[usize]) -> usize {
    match node {
        Node::Leaf { distribution } => misclassified(distribution, dataset, idx),
        Node::Split { feature, threshold, distribution, left, right } => {
            let (l, r): (Vec<usize>, Vec<usize>) =
                idx.iter().partition(|&&i| dataset.feature(i, *feature) <= *threshold);
            let subtree = reduce_errors(left, dataset, &l) + reduce_errors(right, dataset, &r);
            let as_leaf = misclassified(distribution, dataset, idx);
            if as_leaf <= subtree {
                node.make_leaf();
                as_leaf
            } else {
                subtree
            }
        }
    }
}

fn backfit(node: &mut Node, x: &[f64], label: usize) {
    node.distribution_mut()[label] += 1.0;
    if let Node::Split { feature, threshold, left, right, .. } = node {
        if x[*feature] <= *threshold {
            backfit(left, x, label);
        } else {
            backfit(right, x, label);
        }
    }
}
