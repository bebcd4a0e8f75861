use serde::{Deserialize, Serialize};

use super::dataset::argmax_usize;
use super::Dataset;
use crate::error::{validation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self { k: 1 }
    }
}

/// Nearest-neighbour store over min-max normalized features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    k: usize,
    n_classes: usize,
    mins: Vec<f64>,
    maxs: Vec<f64>,
    points: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

pub fn train_knn(dataset: &Dataset, params: KnnParams) -> Result<KnnModel> {
    dataset.require_non_empty()?;
    if params.k == 0 || params.k > dataset.len() {
        return Err(validation(format!("k must lie in 1..={}, got {}", dataset.len(), params.k)));
    }
    let nf = dataset.n_features();
    let mut mins = vec![f64::INFINITY; nf];
    let mut maxs = vec![f64::NEG_INFINITY; nf];
    for inst in dataset.instances() {
        for (f, &v) in inst.features.iter().enumerate() {
            mins[f] = mins[f].min(v);
            maxs[f] = maxs[f].max(v);
        }
    }
    let mut model = KnnModel {
        k: params.k,
        n_classes: dataset.n_classes(),
        mins,
        maxs,
        points: Vec::with_capacity(dataset.len()),
        labels: Vec::with_capacity(dataset.len()),
    };
    for inst in dataset.instances() {
        let p = model.normalize(&inst.features);
        model.points.push(p);
        model.labels.push(inst.label);
    }
    Ok(model)
}

impl KnnModel {
    fn normalize(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&v, (&lo, &hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
            .collect()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Indices of the `k` nearest training points, nearest first; equal
    /// distances resolve to the lower training index.
    pub fn neighbors(&self, x: &[f64]) -> Vec<usize> {
        let q = self.normalize(x);
        let mut dist: Vec<(f64, usize)> = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(), i))
            .collect();
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        dist.into_iter().take(self.k).map(|(_, i)| i).collect()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut votes = vec![0usize; self.n_classes];
        for i in self.neighbors(x) {
            votes[self.labels[i]] += 1;
        }
        argmax_usize(&votes)
    }
}
