use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{
    conductivity_from_temperature, depth_from_echo, load_fixture, Parameter, ReadingSample, SensorSpec,
    UltrasonicModel,
};
use crate::error::{domain, validation, Error, Result};

/// Physical dimensions and per-parameter value envelopes of one pond.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PondProfile {
    pub pond_id: u8,
    pub length_m: f64,
    pub width_m: f64,
    pub depth_range_m: [f64; 2],
    pub ph: [f64; 2],
    pub temperature: [f64; 2],
    pub turbidity: [f64; 2],
    pub conductivity: [f64; 2],
}

// (length, width, depth lo, depth hi) per pond
const POND_DIMENSIONS: [(f64, f64, f64, f64); 5] = [
    (26.0, 17.0, 1.0, 2.0),
    (52.0, 30.0, 1.0, 2.0),
    (105.0, 35.0, 1.0, 2.0),
    (156.0, 80.0, 2.0, 4.0),
    (40.0, 20.0, 1.0, 3.0),
];

fn envelope(pond_id: u8, parameter: Parameter) -> [f64; 2] {
    let values = load_fixture(pond_id, parameter).expect("embedded fixture");
    values
        .iter()
        .fold([f64::INFINITY, f64::NEG_INFINITY], |[lo, hi], &v| [lo.min(v), hi.max(v)])
}

impl PondProfile {
    /// One of the five surveyed ponds, with envelopes taken from the
    /// recorded fixture min/max.
    pub fn builtin(pond_id: u8) -> Result<Self> {
        let &(length_m, width_m, dlo, dhi) = POND_DIMENSIONS
            .get(usize::from(pond_id).wrapping_sub(1))
            .ok_or_else(|| Error::NotFound(format!("no built-in profile for pond {pond_id}")))?;
        Ok(Self {
            pond_id,
            length_m,
            width_m,
            depth_range_m: [dlo, dhi],
            ph: envelope(pond_id, Parameter::Ph),
            temperature: envelope(pond_id, Parameter::Temperature),
            turbidity: envelope(pond_id, Parameter::Turbidity),
            conductivity: envelope(pond_id, Parameter::Conductivity),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let named = [
            ("depth_range_m", self.depth_range_m),
            ("ph", self.ph),
            ("temperature", self.temperature),
            ("turbidity", self.turbidity),
            ("conductivity", self.conductivity),
        ];
        for (name, [lo, hi]) in named {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(validation(format!("profile envelope {name} must satisfy lo <= hi")));
            }
        }
        if !(self.length_m > 0.0 && self.width_m > 0.0) {
            return Err(validation("pond dimensions must be positive"));
        }
        Ok(())
    }
}

/// Sensor characteristics used while generating a stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub ph: SensorSpec<f64>,
    pub temperature: SensorSpec<f64>,
    pub turbidity: SensorSpec<f64>,
    pub conductivity: SensorSpec<f64>,
    pub depth: SensorSpec<f64>,
    pub conductivity_coeff_per_c: f64,
    pub speed_of_sound_m_s: f64,
    /// Transducer clearance above the deepest expected water level.
    pub ultrasonic_clearance_m: f64,
}

impl Default for StreamConfig {
    fn default() -> Self {
        Self {
            ph: SensorSpec::default_for(Parameter::Ph),
            temperature: SensorSpec::default_for(Parameter::Temperature),
            turbidity: SensorSpec::default_for(Parameter::Turbidity),
            conductivity: SensorSpec::default_for(Parameter::Conductivity),
            depth: SensorSpec::default_for(Parameter::Depth),
            conductivity_coeff_per_c: 0.02,
            speed_of_sound_m_s: 340.0,
            ultrasonic_clearance_m: 0.5,
        }
    }
}

/// Seeded generator of one reading per parameter per tick.
///
/// Ticks fall at `0, interval, 2*interval, ...` strictly below `duration`.
/// Each tick yields pH, temperature, turbidity, conductivity and depth in
/// that order.
pub struct PondStream {
    profile: PondProfile,
    config: StreamConfig,
    ultrasonic: UltrasonicModel<f64>,
    rng: ChaCha8Rng,
    duration_s: u64,
    interval_s: u64,
    next_tick: u64,
    pending: std::vec::IntoIter<ReadingSample>,
}

impl PondStream {
    pub fn new(
        profile: PondProfile,
        config: StreamConfig,
        duration_s: u64,
        interval_s: u64,
        seed: u64,
    ) -> Result<Self> {
        if duration_s == 0 || interval_s == 0 {
            return Err(validation("duration and interval must be positive"));
        }
        profile.validate()?;
        let ultrasonic = UltrasonicModel::new(
            config.speed_of_sound_m_s,
            profile.depth_range_m[1] + config.ultrasonic_clearance_m,
        )?;
        Ok(Self {
            profile,
            config,
            ultrasonic,
            rng: ChaCha8Rng::seed_from_u64(seed),
            duration_s,
            interval_s,
            next_tick: 0,
            pending: Vec::new().into_iter(),
        })
    }

    fn uniform(&mut self, [lo, hi]: [f64; 2]) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    fn noisy(&mut self, center: f64, spec: &SensorSpec<f64>, [lo, hi]: [f64; 2]) -> f64 {
        let z: f64 = self.rng.sample(StandardNormal);
        let sigma = spec.noise_sigma;
        let v = (center + sigma * z).max(lo - 3.0 * sigma).min(hi + 3.0 * sigma);
        spec.condition(v)
    }

    fn tick(&mut self, t: u64) -> Result<Vec<ReadingSample>> {
        let p = self.profile.clone();
        let cfg = self.config.clone();

        let ph_center = self.uniform(p.ph);
        let ph = self.noisy(ph_center, &cfg.ph, p.ph);

        let temp_center = self.uniform(p.temperature);
        let temperature = self.noisy(temp_center, &cfg.temperature, p.temperature);

        let turb_center = self.uniform(p.turbidity);
        let turbidity = self.noisy(turb_center, &cfg.turbidity, p.turbidity);

        // Reference conductivity chosen so the compensated value at the
        // envelope's mid temperature falls inside the conductivity envelope.
        let coeff = cfg.conductivity_coeff_per_c;
        let mid_temp = 0.5 * (p.temperature[0] + p.temperature[1]);
        let target = self.uniform(p.conductivity);
        let base = target / (1.0 + coeff * (mid_temp - 25.0));
        let cond_center = conductivity_from_temperature(base, temperature, coeff)?;
        let conductivity = self.noisy(cond_center, &cfg.conductivity, p.conductivity);

        let true_depth = self.uniform(p.depth_range_m);
        let travel = 2.0 * (self.ultrasonic.sensor_height_m - true_depth) / self.ultrasonic.speed_of_sound_m_s;
        let echo_depth = depth_from_echo(travel.max(0.0), &self.ultrasonic)?;
        let depth = self.noisy(echo_depth, &cfg.depth, p.depth_range_m);

        let pond_id = p.pond_id;
        let values = [
            (Parameter::Ph, ph),
            (Parameter::Temperature, temperature),
            (Parameter::Turbidity, turbidity),
            (Parameter::Conductivity, conductivity),
            (Parameter::Depth, depth),
        ];
        values
            .into_iter()
            .map(|(parameter, value)| {
                if value.is_finite() {
                    Ok(ReadingSample { timestamp: t, pond_id, parameter, value })
                } else {
                    Err(domain(format!("non-finite simulated {parameter}")))
                }
            })
            .collect()
    }
}

impl Iterator for PondStream {
    type Item = ReadingSample;

    fn next(&mut self) -> Option<ReadingSample> {
        loop {
            if let Some(s) = self.pending.next() {
                return Some(s);
            }
            if self.next_tick >= self.duration_s {
                return None;
            }
            let t = self.next_tick;
            self.next_tick = self.next_tick.saturating_add(self.interval_s);
            // Profiles are validated on construction, so a tick cannot fail.
            self.pending = self.tick(t).expect("validated profile").into_iter();
        }
    }
}

/// Collects a full stream with the default sensor configuration.
pub fn simulate_pond_stream(
    profile: &PondProfile,
    duration_s: u64,
    interval_s: u64,
    seed: u64,
) -> Result<Vec<ReadingSample>> {
    Ok(PondStream::new(profile.clone(), StreamConfig::default(), duration_s, interval_s, seed)?.collect())
}
