use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};

/// Column order of the water-parameter feature vector.
pub const FEATURE_NAMES: [&str; 5] = ["ph", "temperature", "turbidity", "conductivity", "depth"];

/// Fish categories in declaration order. This order is also the
/// tie-breaking order for every classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Katla,
    Sing,
    Prawn,
    Rui,
    Koi,
    Pangas,
    Tilapia,
    Silvercarp,
    Karpio,
    Magur,
    Shrimp,
}

impl Species {
    pub const ALL: [Species; 11] = [
        Species::Katla,
        Species::Sing,
        Species::Prawn,
        Species::Rui,
        Species::Koi,
        Species::Pangas,
        Species::Tilapia,
        Species::Silvercarp,
        Species::Karpio,
        Species::Magur,
        Species::Shrimp,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Species::Katla => "katla",
            Species::Sing => "sing",
            Species::Prawn => "prawn",
            Species::Rui => "rui",
            Species::Koi => "koi",
            Species::Pangas => "pangas",
            Species::Tilapia => "tilapia",
            Species::Silvercarp => "silvercarp",
            Species::Karpio => "karpio",
            Species::Magur => "magur",
            Species::Shrimp => "shrimp",
        }
    }

    pub fn class_names() -> Vec<String> {
        Self::ALL.iter().map(|s| s.as_str().to_string()).collect()
    }
}

impl fmt::Display for Species {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Species {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|sp| sp.as_str() == lower)
            .ok_or_else(|| validation(format!("unknown species {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub features: Vec<f64>,
    /// Index into the dataset's class names.
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    feature_names: Vec<String>,
    class_names: Vec<String>,
    instances: Vec<Instance>,
}

impl Dataset {
    pub fn new(feature_names: Vec<String>, class_names: Vec<String>, instances: Vec<Instance>) -> Result<Self> {
        if feature_names.is_empty() {
            return Err(validation("dataset needs at least one feature"));
        }
        if class_names.is_empty() {
            return Err(validation("dataset needs at least one class"));
        }
        for (i, inst) in instances.iter().enumerate() {
            if inst.features.len() != feature_names.len() {
                return Err(validation(format!(
                    "instance {i} has {} features, expected {}",
                    inst.features.len(),
                    feature_names.len()
                )));
            }
            if inst.features.iter().any(|v| !v.is_finite()) {
                return Err(validation(format!("instance {i} has a non-finite feature")));
            }
            if inst.label >= class_names.len() {
                return Err(validation(format!("instance {i} has unknown label {}", inst.label)));
            }
        }
        Ok(Self { feature_names, class_names, instances })
    }

    /// Dataset over the five water parameters and the eleven species.
    pub fn water(instances: Vec<Instance>) -> Result<Self> {
        Self::new(FEATURE_NAMES.iter().map(|s| s.to_string()).collect(), Species::class_names(), instances)
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn feature(&self, i: usize, f: usize) -> f64 {
        self.instances[i].features[f]
    }

    pub fn label(&self, i: usize) -> usize {
        self.instances[i].label
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
        }
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for inst in &self.instances {
            counts[inst.label] += 1;
        }
        counts
    }

    /// Most frequent class, lowest index on ties.
    pub fn majority_class(&self) -> usize {
        let counts = self.class_counts();
        argmax_usize(&counts)
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            Err(validation("dataset is empty"))
        } else {
            Ok(())
        }
    }

    /// Reads `ph,temperature,turbidity,conductivity,depth,species`.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| validation(format!("dataset header: {e}")))?.clone();
        let expected: Vec<&str> = FEATURE_NAMES.iter().copied().chain(std::iter::once("species")).collect();
        let got: Vec<String> = headers.iter().map(|h| h.to_ascii_lowercase()).collect();
        if got != expected {
            return Err(validation(format!("dataset header must be {}", expected.join(","))));
        }
        let mut instances = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| validation(format!("dataset row {}: {e}", line + 2)))?;
            let features = (0..FEATURE_NAMES.len())
                .map(|c| {
                    rec[c]
                        .parse::<f64>()
                        .map_err(|_| validation(format!("dataset row {}: bad number {:?}", line + 2, &rec[c])))
                })
                .collect::<Result<Vec<_>>>()?;
            let species: Species = rec[FEATURE_NAMES.len()].parse()?;
            let label = Species::ALL.iter().position(|s| *s == species).expect("known species");
            instances.push(Instance { features, label });
        }
        Self::water(instances)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.feature_names.join(",");
        out.push_str(",species\n");
        for inst in &self.instances {
            for v in &inst.features {
                out.push_str(&format!("{v},"));
            }
            out.push_str(&self.class_names[inst.label]);
            out.push('\n');
        }
        out
    }
}

/// Index of the largest value, lowest index on ties.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn argmax_usize(values: &[usize]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
