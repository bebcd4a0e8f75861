//! Decision table: a lookup from discretized values of a selected feature
//! subset to class counts. The subset is chosen by best-first search on
//! leave-one-out accuracy.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::dataset::{argmax, argmax_usize};
use super::Dataset;
use crate::error::Result;

pub const DEFAULT_BINS: usize = 10;
/// Expansions without improvement before the search stops.
const STALE_LIMIT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionTableParams {
    pub bins: usize,
}

impl Default for DecisionTableParams {
    fn default() -> Self {
        Self { bins: DEFAULT_BINS }
    }
}

/// Equal-width bins over the training range of one feature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Binning {
    pub min: f64,
    pub width: f64,
    pub bins: usize,
}

impl Binning {
    fn fit(values: impl Iterator<Item = f64>, bins: usize) -> Self {
        let (min, max) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let width = if max > min { (max - min) / bins as f64 } else { 0.0 };
        Self { min, width, bins }
    }

    pub fn bin(&self, v: f64) -> u16 {
        if self.width <= 0.0 {
            return 0;
        }
        let b = ((v - self.min) / self.width).floor();
        b.max(0.0).min((self.bins - 1) as f64) as u16
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub key: Vec<u16>,
    pub counts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTableModel {
    n_classes: usize,
    selected: Vec<usize>,
    binning: Vec<Binning>,
    /// Sorted by key.
    rows: Vec<TableRow>,
    majority: usize,
}

fn key_of(bins: &[Vec<u16>], i: usize, subset: &[usize]) -> Vec<u16> {
    subset.iter().map(|&f| bins[f][i]).collect()
}

/// Correct leave-one-out predictions of the table over `subset`.
pub(crate) fn loo_correct(bins: &[Vec<u16>], labels: &[usize], n_classes: usize, subset: &[usize]) -> usize {
    let n = labels.len();
    let mut cells: HashMap<Vec<u16>, Vec<usize>> = HashMap::new();
    let mut global = vec![0usize; n_classes];
    for i in 0..n {
        cells.entry(key_of(bins, i, subset)).or_insert_with(|| vec![0; n_classes])[labels[i]] += 1;
        global[labels[i]] += 1;
    }
    let mut correct = 0;
    for i in 0..n {
        let y = labels[i];
        let mut cell = cells[&key_of(bins, i, subset)].clone();
        cell[y] -= 1;
        let predicted = if cell.iter().sum::<usize>() == 0 {
            global[y] -= 1;
            let p = argmax_usize(&global);
            global[y] += 1;
            p
        } else {
            argmax_usize(&cell)
        };
        if predicted == y {
            correct += 1;
        }
    }
    correct
}

/// Orders candidate subsets: more correct first, then fewer features, then
/// lexicographically smaller feature lists.
pub(crate) fn better(a: (usize, &[usize]), b: (usize, &[usize])) -> bool {
    a.0 > b.0 || (a.0 == b.0 && (a.1.len() < b.1.len() || (a.1.len() == b.1.len() && a.1 < b.1)))
}

pub(crate) fn discretize(dataset: &Dataset, bins: usize) -> (Vec<Binning>, Vec<Vec<u16>>) {
    let binning: Vec<Binning> = (0..dataset.n_features())
        .map(|f| Binning::fit(dataset.instances().iter().map(|x| x.features[f]), bins))
        .collect();
    let binned = binning
        .iter()
        .enumerate()
        .map(|(f, b)| dataset.instances().iter().map(|x| b.bin(x.features[f])).collect())
        .collect();
    (binning, binned)
}

fn best_first(bins: &[Vec<u16>], labels: &[usize], n_classes: usize, n_features: usize) -> Vec<usize> {
    let start: Vec<usize> = Vec::new();
    let start_score = loo_correct(bins, labels, n_classes, &start);
    let mut best = (start_score, start.clone());
    let mut visited: BTreeSet<Vec<usize>> = BTreeSet::from([start.clone()]);
    // open list keyed so that the first entry is the most promising
    let mut open: BTreeMap<(std::cmp::Reverse<usize>, usize, Vec<usize>), ()> = BTreeMap::new();
    open.insert((std::cmp::Reverse(start_score), 0, start), ());
    let mut stale = 0;

    while let Some(((_, _, subset), ())) = open.pop_first() {
        let mut improved = false;
        for f in 0..n_features {
            if subset.contains(&f) {
                continue;
            }
            let mut child = subset.clone();
            child.push(f);
            child.sort_unstable();
            if !visited.insert(child.clone()) {
                continue;
            }
            let score = loo_correct(bins, labels, n_classes, &child);
            if better((score, &child), (best.0, &best.1)) {
                best = (score, child.clone());
                improved = true;
            }
            open.insert((std::cmp::Reverse(score), child.len(), child), ());
        }
        if improved {
            stale = 0;
        } else {
            stale += 1;
            if stale >= STALE_LIMIT {
                break;
            }
        }
    }
    best.1
}

pub fn train_decision_table(dataset: &Dataset, params: DecisionTableParams) -> Result<DecisionTableModel> {
    dataset.require_non_empty()?;
    if params.bins == 0 || params.bins > usize::from(u16::MAX) {
        return Err(crate::error::validation("bins must lie in 1..=65535"));
    }
    let (binning, bins) = discretize(dataset, params.bins);
    let labels: Vec<usize> = dataset.instances().iter().map(|x| x.label).collect();
    let selected = best_first(&bins, &labels, dataset.n_classes(), dataset.n_features());

    let mut table: BTreeMap<Vec<u16>, Vec<u32>> = BTreeMap::new();
    for (i, &y) in labels.iter().enumerate() {
        table.entry(key_of(&bins, i, &selected)).or_insert_with(|| vec![0; dataset.n_classes()])[y] += 1;
    }
    Ok(DecisionTableModel {
        n_classes: dataset.n_classes(),
        selected,
        binning,
        rows: table.into_iter().map(|(key, counts)| TableRow { key, counts }).collect(),
        majority: dataset.majority_class(),
    })
}

impl DecisionTableModel {
    pub fn selected_features(&self) -> &[usize] {
        &self.selected
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let key: Vec<u16> = self.selected.iter().map(|&f| self.binning[f].bin(x[f])).collect();
        match self.rows.binary_search_by(|r| r.key.cmp(&key)) {
            Ok(pos) => {
                let counts: Vec<f64> = self.rows[pos].counts.iter().map(|&c| f64::from(c)).collect();
                argmax(&counts)
            }
            Err(_) => self.majority,
        }
    }
}
