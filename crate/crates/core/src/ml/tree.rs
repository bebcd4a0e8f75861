//! Binary decision trees on numeric features: C4.5-style induction with
//! gain ratio and pessimistic pruning, plus the shared growth machinery
//! used by the forest and the reduced-error-pruned tree.

use rand::seq::index::sample;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::dataset::argmax;
use super::Dataset;
use crate::error::{validation, Result};

const GAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        distribution: Vec<f64>,
    },
    /// Instances with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        distribution: Vec<f64>,
        left: Box<Node>,
        right: Box<Node>,
    },
}

impl Node {
    pub fn distribution(&self) -> &[f64] {
        match self {
            Node::Leaf { distribution } | Node::Split { distribution, .. } => distribution,
        }
    }

    pub(crate) fn distribution_mut(&mut self) -> &mut Vec<f64> {
        match self {
            Node::Leaf { distribution } | Node::Split { distribution, .. } => distribution,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Leaf { .. })
    }

    pub fn n_leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.n_leaves() + right.n_leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub(crate) fn make_leaf(&mut self) {
        let distribution = std::mem::take(self.distribution_mut());
        *self = Node::Leaf { distribution };
    }

    /// Instances misclassified at the leaves, by stored counts.
    fn training_errors(&self) -> f64 {
        match self {
            Node::Leaf { distribution } => leaf_errors(distribution),
            Node::Split { left, right, .. } => left.training_errors() + right.training_errors(),
        }
    }
}

fn total(dist: &[f64]) -> f64 {
    dist.iter().sum()
}

fn leaf_errors(dist: &[f64]) -> f64 {
    total(dist) - dist.iter().copied().fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    n_classes: usize,
    root: Node,
}

impl DecisionTree {
    pub(crate) fn new(n_classes: usize, root: Node) -> Self {
        Self { n_classes, root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Class counts at the leaf reached by `x`. An empty leaf falls back to
    /// the nearest non-empty ancestor.
    pub fn leaf_distribution(&self, x: &[f64]) -> &[f64] {
        let mut node = &self.root;
        let mut fallback = node.distribution();
        loop {
            if total(node.distribution()) > 0.0 {
                fallback = node.distribution();
            }
            match node {
                Node::Leaf { .. } => return fallback,
                Node::Split { feature, threshold, left, right, .. } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(self.leaf_distribution(x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Criterion {
    /// Gain ratio among candidates whose gain is at least the mean gain.
    GainRatio,
    InfoGain,
}

pub(crate) enum FeatureChoice {
    All,
    /// A fresh random subset of this size at every node.
    Random { per_split: usize, rng: ChaCha8Rng },
}

pub(crate) struct Grower<'a> {
    pub data: &'a Dataset,
    pub criterion: Criterion,
    pub min_leaf: usize,
    pub features: FeatureChoice,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
    split_info: f64,
}

fn entropy(counts: &[f64]) -> f64 {
    let n = total(counts);
    if n <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / n;
            -p * p.log2()
        })
        .sum()
}

impl Grower<'_> {
    pub fn distribution(&self, indices: &[usize]) -> Vec<f64> {
        let mut d = vec![0.0; self.data.n_classes()];
        for &i in indices {
            d[self.data.label(i)] += 1.0;
        }
        d
    }

    pub fn grow(&mut self, indices: &[usize]) -> Node {
        let distribution = self.distribution(indices);
        let populated = distribution.iter().filter(|&&c| c > 0.0).count();
        if populated <= 1 || indices.len() < 2 * self.min_leaf {
            return Node::Leaf { distribution };
        }
        let Some(best) = self.choose_split(indices, &distribution) else {
            return Node::Leaf { distribution };
        };
        let (l, r): (Vec<usize>, Vec<usize>) =
            indices.iter().partition(|&&i| self.data.feature(i, best.feature) <= best.threshold);
        let left = Box::new(self.grow(&l));
        let right = Box::new(self.grow(&r));
        Node::Split { feature: best.feature, threshold: best.threshold, distribution, left, right }
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        let nf = self.data.n_features();
        match &mut self.features {
            FeatureChoice::All => (0..nf).collect(),
            FeatureChoice::Random { per_split, rng } => {
                let mut f = sample(rng, nf, (*per_split).min(nf)).into_vec();
                f.sort_unstable();
                f
            }
        }
    }

    fn choose_split(&mut self, indices: &[usize], parent: &[f64]) -> Option<Candidate> {
        let parent_entropy = entropy(parent);
        let candidates: Vec<Candidate> = self
            .candidate_features()
            .into_iter()
            .filter_map(|f| self.best_threshold(indices, f, parent, parent_entropy))
            .filter(|c| c.gain > GAIN_EPS)
            .collect();
        if candidates.is_empty() {
            return None;
        }
        match self.criterion {
            Criterion::InfoGain => candidates.into_iter().reduce(|best, c| if c.gain > best.gain { c } else { best }),
            Criterion::GainRatio => {
                let mean = candidates.iter().map(|c| c.gain).sum::<f64>() / candidates.len() as f64;
                candidates
                    .into_iter()
                    .filter(|c| c.gain >= mean - GAIN_EPS)
                    .reduce(|best, c| {
                        if c.gain / c.split_info > best.gain / best.split_info {
                            c
                        } else {
                            best
                        }
                    })
            }
        }
    }

    /// Highest-gain midpoint threshold on one feature with at least
    /// `min_leaf` instances on each side; lowest threshold on ties.
    fn best_threshold(
        &self,
        indices: &[usize],
        feature: usize,
        parent: &[f64],
        parent_entropy: f64,
    ) -> Option<Candidate> {
        let mut sorted: Vec<(f64, usize)> = indices.iter().map(|&i| (self.data.feature(i, feature), i)).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let n = sorted.len() as f64;
        let mut left = vec![0.0; parent.len()];
        let mut best: Option<Candidate> = None;
        for pos in 0..sorted.len() - 1 {
            left[self.data.label(sorted[pos].1)] += 1.0;
            let (v, next) = (sorted[pos].0, sorted[pos + 1].0);
            let n_left = pos + 1;
            let n_right = sorted.len() - n_left;
            if v == next || n_left < self.min_leaf || n_right < self.min_leaf {
                continue;
            }
            let right: Vec<f64> = parent.iter().zip(&left).map(|(p, l)| p - l).collect();
            let (pl, pr) = (n_left as f64 / n, n_right as f64 / n);
            let gain = parent_entropy - pl * entropy(&left) - pr * entropy(&right);
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                let mut threshold = 0.5 * (v + next);
                if threshold >= next {
                    threshold = v;
                }
                let split_info = -(pl * pl.log2() + pr * pr.log2());
                best = Some(Candidate { feature, threshold, gain, split_info });
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct J48Params {
    pub min_leaf: usize,
    /// Confidence factor for pessimistic pruning, in (0, 0.5].
    pub confidence: f64,
    pub pruned: bool,
}

impl Default for J48Params {
    fn default() -> Self {
        Self { min_leaf: 2, confidence: 0.25, pruned: true }
    }
}

pub fn train_j48(dataset: &Dataset, params: J48Params) -> Result<DecisionTree> {
    dataset.require_non_empty()?;
    if params.min_leaf == 0 {
        return Err(validation("min_leaf must be at least 1"));
    }
    if !(params.confidence > 0.0 && params.confidence <= 0.5) {
        return Err(validation("confidence must lie in (0, 0.5]"));
    }
    let mut grower =
        Grower { data: dataset, criterion: Criterion::GainRatio, min_leaf: params.min_leaf, features: FeatureChoice::All };
    let all: Vec<usize> = (0..dataset.len()).collect();
    let mut root = grower.grow(&all);
    if params.pruned {
        collapse(&mut root);
        let z = Normal::standard().inverse_cdf(1.0 - params.confidence);
        pessimistic_prune(&mut root, params.confidence, z);
    }
    Ok(DecisionTree::new(dataset.n_classes(), root))
}

/// Replaces subtrees that do not reduce training error.
fn collapse(node: &mut Node) {
    if let Node::Split { distribution, left, right, .. } = node {
        let as_leaf = leaf_errors(distribution);
        let subtree = left.training_errors() + right.training_errors();
        if subtree >= as_leaf - 1e-3 {
            node.make_leaf();
        } else {
            collapse(left);
            collapse(right);
        }
    }
}

/// Upper confidence bound on the error count minus observed errors, for
/// `errors` misclassified out of `n`.
pub(crate) fn added_errors(n: f64, errors: f64, confidence: f64, z: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if errors < 1.0 {
        let base = n * (1.0 - confidence.powf(1.0 / n));
        if errors == 0.0 {
            return base;
        }
        return base + errors * (added_errors(n, 1.0, confidence, z) - base);
    }
    if errors + 0.5 >= n {
        return (n - errors).max(0.0);
    }
    let f = (errors + 0.5) / n;
    let r = (f + z * z / (2.0 * n) + z * (f / n - f * f / n + z * z / (4.0 * n * n)).sqrt()) / (1.0 + z * z / n);
    r * n - errors
}

fn estimated_leaf_errors(dist: &[f64], confidence: f64, z: f64) -> f64 {
    let n = total(dist);
    let e = leaf_errors(dist);
    e + added_errors(n, e, confidence, z)
}

/// Bottom-up subtree replacement; returns the estimated errors of `node`
/// after pruning.
fn pessimistic_prune(node: &mut Node, confidence: f64, z: f64) -> f64 {
    match node {
        Node::Leaf { distribution } => estimated_leaf_errors(distribution, confidence, z),
        Node::Split { distribution, left, right, .. } => {
            let subtree = pessimistic_prune(left, confidence, z) + pessimistic_prune(right, confidence, z);
            let as_leaf = estimated_leaf_errors(distribution, confidence, z);
            if as_leaf <= subtree + 0.1 {
                node.make_leaf();
                as_leaf
            } else {
                subtree
            }
        }
    }
}
