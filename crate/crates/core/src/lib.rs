//! Core library for pond water-quality monitoring.
//!
//! The numeric parts that do not learn anything (sensor conversions,
//! suitability rules, classification metrics) are generic over a [`Real`]
//! scalar so they can run in `f32` on constrained targets or `f64` on a
//! server. The learners in [`ml`] work on `f64` feature vectors.

pub mod error;
pub mod metrics;
pub mod ml;
pub mod scalar;
pub mod sensor_sim;
pub mod suitability;

pub use error::{Error, Result};
pub use scalar::Real;

/// Confusion matrix / report aliases at double precision.
pub type Report = metrics::Report<f64>;
pub type ClassMetrics = metrics::ClassMetrics<f64>;
pub type RankedModel = metrics::RankedModel<f64>;

pub type IdealRange = suitability::IdealRange<f64>;
pub type IdealRanges = suitability::IdealRanges<f64>;
pub type ParameterStatus = suitability::ParameterStatus<f64>;
pub type PondVerdict = suitability::PondVerdict<f64>;
pub type ReadingSummary = suitability::ReadingSummary<f64>;

pub type UltrasonicModel = sensor_sim::UltrasonicModel<f64>;
pub type TurbidityCalibration = sensor_sim::TurbidityCalibration<f64>;
pub type SensorSpec = sensor_sim::SensorSpec<f64>;

/// Single-precision variants for embedded consumers.
pub type UltrasonicModel32 = sensor_sim::UltrasonicModel<f32>;
pub type IdealRanges32 = suitability::IdealRanges<f32>;
