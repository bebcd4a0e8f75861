//! Confusion matrices and the classification metrics derived from them.
//!
//! Rows of a [`ConfusionMatrix`] are actual classes, columns are predicted
//! classes. Ratios whose denominator is zero evaluate to 0 and carry
//! `defined = false` so that reports stay totally ordered and serializable.

mod report;

use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Result};
use crate::Real;

pub use report::{rank_models, rank_table, RankedModel, Report, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    class_names: Vec<String>,
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(class_names: Vec<String>) -> Self {
        let n = class_names.len();
        Self { class_names, counts: vec![vec![0; n]; n] }
    }

    pub fn from_counts(class_names: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        let n = class_names.len();
        if counts.len() != n || counts.iter().any(|r| r.len() != n) {
            return Err(validation(format!("confusion matrix must be {n}x{n}")));
        }
        Ok(Self { class_names, counts })
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[actual][predicted] += 1;
    }

    /// Adds another matrix over the same classes into this one.
    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if other.class_names != self.class_names {
            return Err(validation("cannot merge matrices over different classes"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.n_classes()).map(|i| self.counts[i][i]).sum()
    }

    /// Number of instances whose actual class is `class`.
    pub fn support(&self, class: usize) -> u64 {
        self.counts[class].iter().sum()
    }

    pub fn predicted_count(&self, class: usize) -> u64 {
        self.counts.iter().map(|r| r[class]).sum()
    }

    pub fn class_index(&self, name: &str) -> Result<usize> {
        self.class_names
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| domain(format!("unknown class {name:?}")))
    }

    fn check_class(&self, class: usize) -> Result<()> {
        if class < self.n_classes() {
            Ok(())
        } else {
            Err(domain(format!("class index {class} out of range for {} classes", self.n_classes())))
        }
    }

    fn check_total(&self) -> Result<u64> {
        match self.total() {
            0 => Err(domain("confusion matrix is empty")),
            t => Ok(t),
        }
    }

    pub fn counts_for(&self, class: usize) -> Result<OutcomeCounts> {
        self.check_class(class)?;
        let tp = self.counts[class][class];
        let fp = self.predicted_count(class) - tp;
        let fn_ = self.support(class) - tp;
        let tn = self.total() - tp - fp - fn_;
        Ok(OutcomeCounts { tp, fp, fn_, tn })
    }

    /// Reorders classes: new class `i` is old class `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.n_classes();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(validation("order must be a permutation of the classes"));
        }
        let class_names = order.iter().map(|&i| self.class_names[i].clone()).collect();
        let counts = order
            .iter()
            .map(|&r| order.iter().map(|&c| self.counts[r][c]).collect())
            .collect();
        Ok(Self { class_names, counts })
    }
}

/// One-vs-rest outcome counts for a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

/// A ratio plus whether its denominator was non-zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue<T> {
    pub value: T,
    pub defined: bool,
}

impl<T: Real> MetricValue<T> {
    fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            Self { value: T::zero(), defined: false }
        } else {
            Self { value: T::from_count(num) / T::from_count(den), defined: true }
        }
    }
}

/// Fraction of instances on the diagonal.
pub fn accuracy<T: Real>(cm: &ConfusionMatrix) -> Result<T> {
    let total = cm.check_total()?;
    Ok(T::from_count(cm.trace()) / T::from_count(total))
}

pub fn precision<T: Real>(cm: &ConfusionMatrix, class: usize) -> Result<MetricValue<T>> {
    cm.check_total()?;
    let c = cm.counts_for(class)?;
    Ok(MetricValue::ratio(c.tp, c.tp + c.fp))
}

pub fn recall<T: Real>(cm: &ConfusionMatrix, class: usize) -> Result<MetricValue<T>> {
    cm.check_total()?;
    let c = cm.counts_for(class)?;
    Ok(MetricValue::ratio(c.tp, c.tp + c.fn_))
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_score<T: Real>(p: T, r: T) -> T {
    if p + r == T::zero() {
        T::zero()
    } else {
        T::lit(2.0) * p * r / (p + r)
    }
}

pub fn f1<T: Real>(cm: &ConfusionMatrix, class: usize) -> Result<MetricValue<T>> {
    let p = precision::<T>(cm, class)?;
    let r = recall::<T>(cm, class)?;
    Ok(MetricValue { value: f1_score(p.value, r.value), defined: p.defined && r.defined })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TpFpRates<T> {
    pub tp_rate: MetricValue<T>,
    pub fp_rate: MetricValue<T>,
}

pub fn tp_fp_rates<T: Real>(cm: &ConfusionMatrix, class: usize) -> Result<TpFpRates<T>> {
    let tp_rate = recall::<T>(cm, class)?;
    let c = cm.counts_for(class)?;
    Ok(TpFpRates { tp_rate, fp_rate: MetricValue::ratio(c.fp, c.fp + c.tn) })
}

/// Support-weighted mean: `sum(value_i * support_i) / sum(support_i)`.
pub fn weighted_average<T: Real>(values: &[T], supports: &[u64]) -> Result<T> {
    if values.len() != supports.len() {
        return Err(domain(format!(
            "{} values but {} supports",
            values.len(),
            supports.len()
        )));
    }
    let total: u64 = supports.iter().sum();
    if total == 0 {
        return Err(domain("supports sum to zero"));
    }
    let num = values
        .iter()
        .zip(supports)
        .fold(T::zero(), |acc, (&v, &s)| acc + v * T::from_count(s));
    Ok(num / T::from_count(total))
}

/// Cohen's kappa. Returns 0 when chance agreement is 1.
pub fn kappa<T: Real>(cm: &ConfusionMatrix) -> Result<T> {
    let total = cm.check_total()?;
    let chance: u128 = (0..cm.n_classes())
        .map(|k| u128::from(cm.support(k)) * u128::from(cm.predicted_count(k)))
        .sum();
    let total_sq = u128::from(total) * u128::from(total);
    if chance == total_sq {
        return Ok(T::zero());
    }
    let p_o = accuracy::<T>(cm)?;
    let p_e = T::from_u128(chance).expect("count") / T::from_u128(total_sq).expect("count");
    Ok((p_o - p_e) / (T::one() - p_e))
}

/// Per-class detail row of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics<T> {
    pub class: String,
    pub support: u64,
    pub counts: OutcomeCounts,
    pub precision: MetricValue<T>,
    pub recall: MetricValue<T>,
    pub f1: MetricValue<T>,
    pub tp_rate: MetricValue<T>,
    pub fp_rate: MetricValue<T>,
}

pub fn class_metrics<T: Real>(cm: &ConfusionMatrix, class: usize) -> Result<ClassMetrics<T>> {
    let rates = tp_fp_rates::<T>(cm, class)?;
    Ok(ClassMetrics {
        class: cm.class_names[class].clone(),
        support: cm.support(class),
        counts: cm.counts_for(class)?,
        precision: precision(cm, class)?,
        recall: recall(cm, class)?,
        f1: f1(cm, class)?,
        tp_rate: rates.tp_rate,
        fp_rate: rates.fp_rate,
    })
}
