//! Multiclass additive logistic regression with regression stumps as the
//! base learner.

use serde::{Deserialize, Serialize};

use super::dataset::argmax;
use super::Dataset;
use crate::error::{validation, Result};

/// Working responses are clipped to this magnitude.
const Z_MAX: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogitBoostParams {
    pub iterations: usize,
}

impl Default for LogitBoostParams {
    fn default() -> Self {
        Self { iterations: 10 }
    }
}

/// Piecewise-constant regressor: `left` when `x[feature] <= threshold`.
/// A stump without a feature is a constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature: Option<usize>,
    pub threshold: f64,
    pub left: f64,
    pub right: f64,
}

impl Stump {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self.feature {
            Some(f) if x[f] > self.threshold => self.right,
            _ => self.left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogitBoostModel {
    n_classes: usize,
    /// `rounds[m][j]` is the stump added to class `j` at iteration `m`.
    rounds: Vec<Vec<Stump>>,
}

/// Weighted least-squares stump over all features; lowest feature and then
/// lowest threshold win ties.
pub(crate) fn fit_stump(dataset: &Dataset, z: &[f64], w: &[f64]) -> Stump {
    let sw: f64 = w.iter().sum();
    let swz: f64 = w.iter().zip(z).map(|(a, b)| a * b).sum();
    let mean = if sw > 0.0 { swz / sw } else { 0.0 };
    let mut best = Stump { feature: None, threshold: 0.0, left: mean, right: mean };
    // minimising SSE is maximising the explained term sl^2/wl + sr^2/wr
    let mut best_score = if sw > 0.0 { swz * swz / sw } else { 0.0 };

    let mut order: Vec<usize> = (0..dataset.len()).collect();
    for f in 0..dataset.n_features() {
        order.sort_by(|&a, &b| dataset.feature(a, f).total_cmp(&dataset.feature(b, f)).then(a.cmp(&b)));
        let (mut wl, mut sl) = (0.0, 0.0);
        for pos in 0..order.len() - 1 {
            let i = order[pos];
            wl += w[i];
            sl += w[i] * z[i];
            let (v, next) = (dataset.feature(i, f), dataset.feature(order[pos + 1], f));
            if v == next {
                continue;
            }
            let (wr, sr) = (sw - wl, swz - sl);
            if wl <= 0.0 || wr <= 0.0 {
                continue;
            }
            let score = sl * sl / wl + sr * sr / wr;
            if score > best_score + 1e-12 * best_score.abs().max(1.0) {
                best_score = score;
                let mut threshold = 0.5 * (v + next);
                if threshold >= next {
                    threshold = v;
                }
                best = Stump { feature: Some(f), threshold, left: sl / wl, right: sr / wr };
            }
        }
    }
    best
}

fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exp.iter().sum();
    exp.into_iter().map(|e| e / sum).collect()
}

pub fn train_logitboost(dataset: &Dataset, params: LogitBoostParams) -> Result<LogitBoostModel> {
    dataset.require_non_empty()?;
    let j = dataset.n_classes();
    let populated = dataset.class_counts().iter().filter(|&&c| c > 0).count();
    if j < 2 || populated < 2 {
        return Err(validation("LogitBoost needs at least two classes with instances"));
    }
    let n = dataset.len();
    let jf = j as f64;
    let mut scores = vec![vec![0.0; j]; n];
    let mut rounds = Vec::with_capacity(params.iterations);

    for _ in 0..params.iterations {
        let probs: Vec<Vec<f64>> = scores.iter().map(|s| softmax(s)).collect();
        let mut stumps: Vec<Stump> = (0..j)
            .map(|c| {
                let mut z = vec![0.0; n];
                let mut w = vec![0.0; n];
                for i in 0..n {
                    let p = probs[i][c];
                    let y = if dataset.label(i) == c { 1.0 } else { 0.0 };
                    let wi = p * (1.0 - p);
                    w[i] = wi;
                    z[i] = if wi > 0.0 {
                        ((y - p) / wi).clamp(-Z_MAX, Z_MAX)
                    } else if y > p {
                        Z_MAX
                    } else {
                        -Z_MAX
                    };
                }
                fit_stump(dataset, &z, &w)
            })
            .collect();

        // Scale by (J-1)/J here; centering across classes depends on x and
        // is applied wherever the stumps are evaluated.
        let scale = (jf - 1.0) / jf;
        for s in stumps.iter_mut() {
            s.left *= scale;
            s.right *= scale;
        }
        for (i, inst) in dataset.instances().iter().enumerate() {
            let outs: Vec<f64> = stumps.iter().map(|s| s.eval(&inst.features)).collect();
            let mean = outs.iter().sum::<f64>() / jf;
            for c in 0..j {
                scores[i][c] += outs[c] - mean;
            }
        }
        rounds.push(stumps);
    }
    Ok(LogitBoostModel { n_classes: j, rounds })
}

impl LogitBoostModel {
    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn iterations(&self) -> usize {
        self.rounds.len()
    }

    /// Additive class scores using the first `rounds` iterations.
    pub fn scores_after(&self, x: &[f64], rounds: usize) -> Vec<f64> {
        let jf = self.n_classes as f64;
        let mut scores = vec![0.0; self.n_classes];
        for stumps in self.rounds.iter().take(rounds) {
            let outs: Vec<f64> = stumps.iter().map(|s| s.eval(x)).collect();
            let mean = outs.iter().sum::<f64>() / jf;
            for (s, o) in scores.iter_mut().zip(&outs) {
                *s += o - mean;
            }
        }
        scores
    }

    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        self.scores_after(x, self.rounds.len())
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        argmax(&self.scores(x))
    }
}
