use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{accuracy, class_metrics, kappa, weighted_average, ClassMetrics, ConfusionMatrix, MetricValue};
use crate::error::{Error, Result};
use crate::Real;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Evaluation summary for one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub schema_version: u32,
    pub algorithm: String,
    pub matrix: ConfusionMatrix,
    pub accuracy: T,
    pub kappa: T,
    pub per_class: Vec<ClassMetrics<T>>,
    pub weighted_precision: T,
    pub weighted_recall: T,
    pub weighted_f1: T,
    pub weighted_tp_rate: T,
    pub weighted_fp_rate: T,
}

impl<T: Real> Report<T> {
    pub fn from_matrix(algorithm: impl Into<String>, matrix: ConfusionMatrix) -> Result<Self> {
        let accuracy = accuracy::<T>(&matrix)?;
        let kappa = kappa::<T>(&matrix)?;
        let per_class = (0..matrix.n_classes())
            .map(|c| class_metrics::<T>(&matrix, c))
            .collect::<Result<Vec<_>>>()?;
        let supports: Vec<u64> = per_class.iter().map(|m| m.support).collect();
        let wavg = |f: fn(&ClassMetrics<T>) -> MetricValue<T>| {
            let values: Vec<T> = per_class.iter().map(|m| f(m).value).collect();
            weighted_average(&values, &supports)
        };
        Ok(Self {
            schema_version: REPORT_SCHEMA_VERSION,
            algorithm: algorithm.into(),
            accuracy,
            kappa,
            weighted_precision: wavg(|m| m.precision)?,
            weighted_recall: wavg(|m| m.recall)?,
            weighted_f1: wavg(|m| m.f1)?,
            weighted_tp_rate: wavg(|m| m.tp_rate)?,
            weighted_fp_rate: wavg(|m| m.fp_rate)?,
            per_class,
            matrix,
        })
    }

    /// Text block laid out like a Weka cross-validation summary.
    pub fn to_text(&self) -> String {
        let total = self.matrix.total();
        let correct = self.matrix.trace();
        let pct = |n: u64| 100.0 * n as f64 / total as f64;
        let num = |m: &MetricValue<T>| {
            if m.defined {
                format!("{:.3}", m.value.to_f64().unwrap_or(f64::NAN))
            } else {
                "?".to_string()
            }
        };
        let f = |v: T| format!("{:.3}", v.to_f64().unwrap_or(f64::NAN));

        let mut s = String::new();
        let _ = writeln!(s, "=== Scheme: {} ===", self.algorithm);
        let _ = writeln!(s, "=== Summary ===");
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<33}{:>8}{:>18.4} %", "Correctly Classified Instances", correct, pct(correct));
        let _ = writeln!(
            s,
            "{:<33}{:>8}{:>18.4} %",
            "Incorrectly Classified Instances",
            total - correct,
            pct(total - correct)
        );
        let _ = writeln!(s, "{:<33}{:>14.4}", "Kappa statistic", self.kappa.to_f64().unwrap_or(f64::NAN));
        let _ = writeln!(s, "{:<33}{:>8}", "Total Number of Instances", total);
        let _ = writeln!(s);
        let _ = writeln!(s, "=== Detailed Accuracy By Class ===");
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:<15}{:>9}{:>9}{:>11}{:>9}{:>11}  Class",
            "", "TP Rate", "FP Rate", "Precision", "Recall", "F-Measure"
        );
        for m in &self.per_class {
            let _ = writeln!(
                s,
                "{:<15}{:>9}{:>9}{:>11}{:>9}{:>11}  {}",
                "",
                num(&m.tp_rate),
                num(&m.fp_rate),
                num(&m.precision),
                num(&m.recall),
                num(&m.f1),
                m.class
            );
        }
        let _ = writeln!(
            s,
            "{:<15}{:>9}{:>9}{:>11}{:>9}{:>11}",
            "Weighted Avg.",
            f(self.weighted_tp_rate),
            f(self.weighted_fp_rate),
            f(self.weighted_precision),
            f(self.weighted_recall),
            f(self.weighted_f1)
        );
        let _ = writeln!(s);
        let _ = writeln!(s, "=== Confusion Matrix ===");
        let _ = writeln!(s);
        let letters: Vec<String> = (0..self.matrix.n_classes()).map(column_letter).collect();
        let width = self
            .matrix
            .counts()
            .iter()
            .flatten()
            .map(|c| c.to_string().len())
            .chain(letters.iter().map(String::len))
            .max()
            .unwrap_or(1)
            + 1;
        for l in &letters {
            let _ = write!(s, "{l:>width$}");
        }
        let _ = writeln!(s, "   <-- classified as");
        for (row, (l, name)) in self.matrix.counts().iter().zip(letters.iter().zip(self.matrix.class_names())) {
            for c in row {
                let _ = write!(s, "{c:>width$}");
            }
            let _ = writeln!(s, " | {l} = {name}");
        }
        s
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        if r.schema_version != REPORT_SCHEMA_VERSION {
            return Err(Error::Serialization(format!(
                "unsupported report schema version {}",
                r.schema_version
            )));
        }
        Ok(r)
    }
}

fn column_letter(i: usize) -> String {
    let mut n = i;
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (n % 26) as u8);
        if n < 26 {
            break;
        }
        n = n / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// One row of the model comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedModel<T> {
    pub position: usize,
    pub algorithm: String,
    pub accuracy: T,
    pub kappa: T,
    pub weighted_tp_rate: T,
}

/// Orders by accuracy, then kappa, then weighted TP rate (all descending),
/// then algorithm name ascending. Positions start at 1.
pub fn rank_models<T: Real>(reports: &[Report<T>]) -> Vec<RankedModel<T>> {
    let desc = |a: T, b: T| b.partial_cmp(&a).unwrap_or(Ordering::Equal);
    let mut sorted: Vec<&Report<T>> = reports.iter().collect();
    sorted.sort_by(|a, b| {
        desc(a.accuracy, b.accuracy)
            .then_with(|| desc(a.kappa, b.kappa))
            .then_with(|| desc(a.weighted_tp_rate, b.weighted_tp_rate))
            .then_with(|| a.algorithm.cmp(&b.algorithm))
    });
    sorted
        .into_iter()
        .enumerate()
        .map(|(i, r)| RankedModel {
            position: i + 1,
            algorithm: r.algorithm.clone(),
            accuracy: r.accuracy,
            kappa: r.kappa,
            weighted_tp_rate: r.weighted_tp_rate,
        })
        .collect()
}

fn ordinal(n: usize) -> String {
    let suffix = match (n % 10, n % 100) {
        (_, 11..=13) => "th",
        (1, _) => "st",
        (2, _) => "nd",
        (3, _) => "rd",
        _ => "th",
    };
    format!("{n}{suffix}")
}

/// Comparison table with percentages to two decimals.
pub fn rank_table<T: Real>(ranked: &[RankedModel<T>]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<6}{:<16}{:>14}{:>22}{:>20}  Position",
        "S.L.", "Model", "Accuracy (%)", "Kappa Statistics (%)", "Avg. TP Rate (%)"
    );
    let pct = |v: T| 100.0 * v.to_f64().unwrap_or(f64::NAN);
    for (i, r) in ranked.iter().enumerate() {
        let _ = writeln!(
            s,
            "{:<6}{:<16}{:>14.2}{:>22.2}{:>20.2}  {} Rank",
            i + 1,
            r.algorithm,
            pct(r.accuracy),
            pct(r.kappa),
            pct(r.weighted_tp_rate),
            ordinal(r.position)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(name: &str, counts: Vec<Vec<u64>>) -> Report<f64> {
        let names = (0..counts.len()).map(|i| format!("c{i}")).collect();
        Report::from_matrix(name, ConfusionMatrix::from_counts(names, counts).unwrap()).unwrap()
    }

    #[test]
    fn ranks_by_accuracy() {
        let a = report("rf", vec![vec![47, 3], vec![3, 47]]); // 0.94
        let b = report("knn", vec![vec![46, 4], vec![3, 47]]); // 0.93
        let c = report("dt", vec![vec![40, 10], vec![10, 40]]); // 0.80
        let ranked = rank_models(&[c.clone(), a.clone(), b.clone()]);
        let names: Vec<_> = ranked.iter().map(|r| r.algorithm.as_str()).collect();
        assert_eq!(names, ["rf", "knn", "dt"]);
        assert_eq!(ranked.iter().map(|r| r.position).collect::<Vec<_>>(), [1, 2, 3]);
        assert_eq!(rank_models(&[a])[0].position, 1);
    }

    #[test]
    fn accuracy_tie_broken_by_kappa() {
        // same accuracy 0.8, different marginals
        let balanced = report("zeta", vec![vec![40, 10], vec![10, 40]]);
        let skewed = report("alpha", vec![vec![80, 0], vec![20, 0]]);
        assert_eq!(balanced.accuracy, skewed.accuracy);
        assert!(balanced.kappa > skewed.kappa);
        let ranked = rank_models(&[skewed, balanced]);
        assert_eq!(ranked[0].algorithm, "zeta");
    }

    #[test]
    fn text_layout_and_json_round_trip() {
        let r = report("j48", vec![vec![50, 5], vec![5, 40]]);
        let t = r.to_text();
        assert!(t.contains("Correctly Classified Instances"));
        assert!(t.contains("90.0000 %"));
        assert!(t.contains("Weighted Avg."));
        assert!(t.contains("| b = c1"));
        let back = Report::<f64>::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rank_table_format() {
        let r = report("rf", vec![vec![47, 3], vec![3, 47]]);
        let t = rank_table(&rank_models(&[r]));
        assert!(t.contains("94.00"));
        assert!(t.contains("1st Rank"));
        assert_eq!(ordinal(2), "2nd");
        assert_eq!(ordinal(11), "11th");
    }

    #[test]
    fn letters() {
        assert_eq!(column_letter(0), "a");
        assert_eq!(column_letter(25), "z");
        assert_eq!(column_letter(26), "aa");
    }
}
