//! Classifiers, stratified cross-validation and a synthetic dataset generator.

mod dataset;
mod decision_table;
mod folds;
mod forest;
mod generator;
mod knn;
mod logitboost;
mod reptree;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Error, Result};
use crate::metrics::ConfusionMatrix;

pub use dataset::{Dataset, Instance, Species, FEATURE_NAMES};
pub use decision_table::{
    train_decision_table, Binning, DecisionTableModel, DecisionTableParams, TableRow, DEFAULT_BINS,
};
pub use folds::{stratified_folds, FoldPlan};
pub use forest::{default_features_per_split, train_random_forest, ForestModel, ForestParams};
pub use generator::{generate_labeled_dataset, SpeciesConfig, SpeciesEnvelope};
pub use knn::{train_knn, KnnModel, KnnParams};
pub use logitboost::{train_logitboost, LogitBoostModel, LogitBoostParams, Stump};
pub use reptree::{grow_prune_split, train_reptree, RepTreeParams};
pub use tree::{train_j48, DecisionTree, J48Params, Node};

pub const MODEL_FORMAT: &str = "pondwatch-model";
pub const MODEL_VERSION: u32 = 1;

/// An algorithm tag together with its hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", content = "params", rename_all = "snake_case")]
pub enum AlgorithmSpec {
    Knn(KnnParams),
    J48(J48Params),
    RandomForest(ForestParams),
    #[serde(rename = "reptree")]
    RepTree(RepTreeParams),
    DecisionTable(DecisionTableParams),
    #[serde(rename = "logitboost")]
    LogitBoost(LogitBoostParams),
}

impl AlgorithmSpec {
    pub const TAGS: [&'static str; 6] = ["knn", "j48", "random_forest", "reptree", "decision_table", "logitboost"];

    /// All six algorithms with default hyperparameters, in tag order.
    pub fn all_defaults() -> Vec<AlgorithmSpec> {
        Self::TAGS.iter().map(|t| t.parse().expect("known tag")).collect()
    }

    pub fn tag(&self) -> &'static str {
        match self {
            AlgorithmSpec::Knn(_) => "knn",
            AlgorithmSpec::J48(_) => "j48",
            AlgorithmSpec::RandomForest(_) => "random_forest",
            AlgorithmSpec::RepTree(_) => "reptree",
            AlgorithmSpec::DecisionTable(_) => "decision_table",
            AlgorithmSpec::LogitBoost(_) => "logitboost",
        }
    }

    /// Replaces the seed of seeded algorithms; others are returned unchanged.
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            AlgorithmSpec::RandomForest(p) => AlgorithmSpec::RandomForest(ForestParams { seed, ..p }),
            AlgorithmSpec::RepTree(p) => AlgorithmSpec::RepTree(RepTreeParams { seed, ..p }),
            other => other,
        }
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    /// Parses a tag into its default configuration.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "knn" | "ibk" => AlgorithmSpec::Knn(KnnParams::default()),
            "j48" | "c45" => AlgorithmSpec::J48(J48Params::default()),
            "random_forest" | "rf" => AlgorithmSpec::RandomForest(ForestParams::default()),
            "reptree" => AlgorithmSpec::RepTree(RepTreeParams::default()),
            "decision_table" | "dt" => AlgorithmSpec::DecisionTable(DecisionTableParams::default()),
            "logitboost" => AlgorithmSpec::LogitBoost(LogitBoostParams::default()),
            other => {
                return Err(validation(format!(
                    "unknown algorithm '{other}'; valid tags: {}",
                    Self::TAGS.join(", ")
                )))
            }
        })
    }
}

/// A fitted classifier of any supported kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", content = "model", rename_all = "snake_case")]
pub enum TrainedModel {
    Knn(KnnModel),
    J48(DecisionTree),
    RandomForest(ForestModel),
    #[serde(rename = "reptree")]
    RepTree(DecisionTree),
    DecisionTable(DecisionTableModel),
    #[serde(rename = "logitboost")]
    LogitBoost(LogitBoostModel),
}

impl TrainedModel {
    pub fn tag(&self) -> &'static str {
        match self {
            TrainedModel::Knn(_) => "knn",
            TrainedModel::J48(_) => "j48",
            TrainedModel::RandomForest(_) => "random_forest",
            TrainedModel::RepTree(_) => "reptree",
            TrainedModel::DecisionTable(_) => "decision_table",
            TrainedModel::LogitBoost(_) => "logitboost",
        }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        match self {
            TrainedModel::Knn(m) => m.predict(x),
            TrainedModel::J48(m) | TrainedModel::RepTree(m) => m.predict(x),
            TrainedModel::RandomForest(m) => m.predict(x),
            TrainedModel::DecisionTable(m) => m.predict(x),
            TrainedModel::LogitBoost(m) => m.predict(x),
        }
    }
}

pub fn train(spec: &AlgorithmSpec, dataset: &Dataset) -> Result<TrainedModel> {
    Ok(match *spec {
        AlgorithmSpec::Knn(p) => TrainedModel::Knn(train_knn(dataset, p)?),
        AlgorithmSpec::J48(p) => TrainedModel::J48(train_j48(dataset, p)?),
        AlgorithmSpec::RandomForest(p) => TrainedModel::RandomForest(train_random_forest(dataset, p)?),
        AlgorithmSpec::RepTree(p) => TrainedModel::RepTree(train_reptree(dataset, p)?),
        AlgorithmSpec::DecisionTable(p) => TrainedModel::DecisionTable(train_decision_table(dataset, p)?),
        AlgorithmSpec::LogitBoost(p) => TrainedModel::LogitBoost(train_logitboost(dataset, p)?),
    })
}

/// Stratified k-fold cross-validation with predictions pooled into one matrix.
pub fn cross_validate(spec: &AlgorithmSpec, dataset: &Dataset, k: usize, seed: u64) -> Result<ConfusionMatrix> {
    let plan = stratified_folds(dataset, k, seed)?;
    let mut cm = ConfusionMatrix::new(dataset.class_names().to_vec());
    for fold in 0..k {
        let (train_idx, test_idx) = plan.split(fold);
        if test_idx.is_empty() {
            continue;
        }
        let model = train(spec, &dataset.subset(&train_idx))?;
        for &i in &test_idx {
            let inst = &dataset.instances()[i];
            cm.record(inst.label, model.predict(&inst.features));
        }
    }
    Ok(cm)
}

/// Self-describing JSON model file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub version: u32,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
    #[serde(flatten)]
    pub model: TrainedModel,
}

impl ModelFile {
    pub fn new(dataset: &Dataset, model: TrainedModel) -> Self {
        Self {
            format: MODEL_FORMAT.to_string(),
            version: MODEL_VERSION,
            feature_names: dataset.feature_names().to_vec(),
            class_names: dataset.class_names().to_vec(),
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
            return Err(Error::Serialization(format!(
                "unsupported model file {} v{}",
                file.format, file.version
            )));
        }
        Ok(file)
    }
}
