//! Synthetic labeled water-parameter datasets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::dataset::{Species, FEATURE_NAMES};
use super::{Dataset, Instance};
use crate::error::{validation, Result};

/// Feature ranges for one species, in `FEATURE_NAMES` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesEnvelope {
    pub name: String,
    pub ranges: [[f64; 2]; 5],
    /// True when the ranges are invented defaults rather than published
    /// growing conditions.
    pub synthetic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesConfig {
    pub species: Vec<SpeciesEnvelope>,
    /// Gaussian noise sigma as a fraction of each envelope's width; 0 disables noise.
    pub noise_fraction: f64,
}

// Published optimum growing temperatures.
const PUBLISHED_TEMPERATURE: [(Species, [f64; 2]); 4] = [
    (Species::Rui, [20.0, 26.0]),
    (Species::Koi, [15.0, 25.0]),
    (Species::Silvercarp, [18.0, 30.0]),
    (Species::Karpio, [20.0, 25.0]),
];

// Invented temperatures for the remaining species.
const SYNTHETIC_TEMPERATURE: [(Species, [f64; 2]); 7] = [
    (Species::Katla, [25.0, 30.0]),
    (Species::Sing, [24.0, 32.0]),
    (Species::Prawn, [26.0, 31.0]),
    (Species::Pangas, [26.0, 33.0]),
    (Species::Tilapia, [22.0, 29.0]),
    (Species::Magur, [23.0, 30.0]),
    (Species::Shrimp, [27.0, 32.0]),
];

const PH_BANDS: [[f64; 2]; 3] = [[6.5, 6.95], [7.05, 7.5], [7.6, 8.2]];
const TURBIDITY_BANDS: [[f64; 2]; 2] = [[3.30, 3.46], [3.44, 3.60]];
const DEPTH_BANDS: [[f64; 2]; 3] = [[1.0, 2.0], [1.5, 3.0], [2.5, 4.0]];

impl SpeciesConfig {
    /// All eleven species. Conductivity bands are pairwise disjoint, so the
    /// noise-free classes are separable; the other features overlap.
    pub fn default_species() -> Self {
        let species = Species::ALL
            .iter()
            .enumerate()
            .map(|(i, &sp)| {
                let (temperature, synthetic) = PUBLISHED_TEMPERATURE
                    .iter()
                    .find(|(s, _)| *s == sp)
                    .map(|(_, r)| (*r, false))
                    .or_else(|| SYNTHETIC_TEMPERATURE.iter().find(|(s, _)| *s == sp).map(|(_, r)| (*r, true)))
                    .expect("every species has a temperature envelope");
                let lo = 990.0 + 70.0 * i as f64;
                SpeciesEnvelope {
                    name: sp.as_str().to_string(),
                    ranges: [
                        PH_BANDS[i % 3],
                        temperature,
                        TURBIDITY_BANDS[i % 2],
                        [lo, lo + 50.0],
                        DEPTH_BANDS[(i / 3) % 3],
                    ],
                    synthetic,
                }
            })
            .collect();
        Self { species, noise_fraction: 0.0 }
    }

    pub fn with_noise(mut self, noise_fraction: f64) -> Self {
        self.noise_fraction = noise_fraction;
        self
    }

    pub fn envelope(&self, name: &str) -> Option<&SpeciesEnvelope> {
        self.species.iter().find(|s| s.name == name)
    }
}

/// Draws a species uniformly per instance, then each feature uniformly
/// within that species' envelope plus optional Gaussian noise.
pub fn generate_labeled_dataset(n: usize, seed: u64, config: &SpeciesConfig) -> Result<Dataset> {
    if n == 0 {
        return Err(validation("dataset size must be at least 1"));
    }
    if config.species.is_empty() {
        return Err(validation("species configuration is empty"));
    }
    if !(config.noise_fraction >= 0.0 && config.noise_fraction.is_finite()) {
        return Err(validation("noise fraction must be a finite non-negative number"));
    }
    for s in &config.species {
        if s.ranges.iter().any(|[lo, hi]| !(lo.is_finite() && hi.is_finite() && lo <= hi)) {
            return Err(validation(format!("envelope for {} must satisfy lo <= hi", s.name)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances = (0..n)
        .map(|_| {
            let label = rng.random_range(0..config.species.len());
            let features = config.species[label]
                .ranges
                .iter()
                .map(|&[lo, hi]| {
                    let u: f64 = rng.random();
                    let mut v = lo + (hi - lo) * u;
                    if config.noise_fraction > 0.0 {
                        let z: f64 = rng.sample(StandardNormal);
                        v += config.noise_fraction * (hi - lo) * z;
                    }
                    v
                })
                .collect();
            Instance { features, label }
        })
        .collect();
    Dataset::new(
        FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        config.species.iter().map(|s| s.name.clone()).collect(),
        instances,
    )
}
