//! Deterministic models of the pond sensors, a seeded stream generator and
//! the embedded field recordings.

mod fixtures;
mod stream;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::Real;

pub use fixtures::{fixture_csv, load_fixture, FIXTURE_PARAMETERS, FIXTURE_PONDS, FIXTURE_ROWS};
pub use stream::{simulate_pond_stream, PondProfile, PondStream, StreamConfig};

/// Measured water parameter. Units are fixed per member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Parameter {
    #[serde(rename = "pH")]
    Ph,
    #[serde(rename = "temperature_C")]
    Temperature,
    #[serde(rename = "turbidity_NTU")]
    Turbidity,
    #[serde(rename = "conductivity_uS_cm")]
    Conductivity,
    #[serde(rename = "depth_m")]
    Depth,
    #[serde(rename = "DO_mg_l")]
    DissolvedOxygen,
    #[serde(rename = "BOD_mg_l")]
    Bod,
    #[serde(rename = "COD_mg_l")]
    Cod,
}

impl Parameter {
    pub const ALL: [Parameter; 8] = [
        Parameter::Ph,
        Parameter::Temperature,
        Parameter::Turbidity,
        Parameter::Conductivity,
        Parameter::Depth,
        Parameter::DissolvedOxygen,
        Parameter::Bod,
        Parameter::Cod,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Ph => "pH",
            Parameter::Temperature => "temperature_C",
            Parameter::Turbidity => "turbidity_NTU",
            Parameter::Conductivity => "conductivity_uS_cm",
            Parameter::Depth => "depth_m",
            Parameter::DissolvedOxygen => "DO_mg_l",
            Parameter::Bod => "BOD_mg_l",
            Parameter::Cod => "COD_mg_l",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Parameter::Ph => "",
            Parameter::Temperature => "°C",
            Parameter::Turbidity => "NTU",
            Parameter::Conductivity => "µS/cm",
            Parameter::Depth => "m",
            Parameter::DissolvedOxygen | Parameter::Bod | Parameter::Cod => "mg/L",
        }
    }
}

impl fmt::Display for Parameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let p = match lower.as_str() {
            "ph" => Parameter::Ph,
            "temperature_c" | "temperature" | "temp" => Parameter::Temperature,
            "turbidity_ntu" | "turbidity" => Parameter::Turbidity,
            "conductivity_us_cm" | "conductivity" | "cond" => Parameter::Conductivity,
            "depth_m" | "depth" => Parameter::Depth,
            "do_mg_l" | "do" => Parameter::DissolvedOxygen,
            "bod_mg_l" | "bod" => Parameter::Bod,
            "cod_mg_l" | "cod" => Parameter::Cod,
            _ => return Err(Error::NotFound(format!("unknown parameter {s:?}"))),
        };
        Ok(p)
    }
}

/// One timestamped measurement for one pond and parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadingSample {
    /// Seconds since the start of the stream.
    pub timestamp: u64,
    pub pond_id: u8,
    pub parameter: Parameter,
    pub value: f64,
}

/// Output range, quantization and noise of one sensor channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec<T> {
    pub parameter: Parameter,
    pub min: T,
    pub max: T,
    pub resolution: T,
    pub noise_sigma: T,
}

impl<T: Real> SensorSpec<T> {
    pub fn new(parameter: Parameter, min: T, max: T, resolution: T, noise_sigma: T) -> Result<Self> {
        if !(min < max) {
            return Err(domain(format!("sensor range for {parameter}: min must be below max")));
        }
        if !(resolution > T::zero()) {
            return Err(domain("sensor resolution must be positive"));
        }
        if !(noise_sigma >= T::zero()) {
            return Err(domain("noise sigma must be non-negative"));
        }
        Ok(Self { parameter, min, max, resolution, noise_sigma })
    }

    /// Default channel characteristics for each simulated parameter.
    pub fn default_for(parameter: Parameter) -> Self {
        let (min, max, res, sigma) = match parameter {
            Parameter::Ph => (0.0, 14.0, 0.01, 0.05),
            // DS18B20 at 12-bit resolution.
            Parameter::Temperature => (-55.0, 125.0, 0.0625, 0.1),
            Parameter::Turbidity => (0.0, 3000.0, 0.01, 0.01),
            Parameter::Conductivity => (0.0, 20000.0, 0.01, 5.0),
            Parameter::Depth => (0.0, 10.0, 0.01, 0.01),
            Parameter::DissolvedOxygen | Parameter::Bod | Parameter::Cod => (0.0, 50.0, 0.01, 0.05),
        };
        Self {
            parameter,
            min: T::lit(min),
            max: T::lit(max),
            resolution: T::lit(res),
            noise_sigma: T::lit(sigma),
        }
    }

    /// Clamps to the sensor range, then snaps to the resolution grid.
    pub fn condition(&self, value: T) -> T {
        let clamped = value.max(self.min).min(self.max);
        snap(clamped, self.resolution).max(self.min).min(self.max)
    }
}

/// Rounds to the nearest multiple of `step`, halves away from zero.
pub fn snap<T: Real>(value: T, step: T) -> T {
    let n = (value / step).round();
    let inv = (T::one() / step).round();
    if inv >= T::one() && inv * step == T::one() {
        n / inv
    } else {
        n * step
    }
}

/// Time-of-flight ranging parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UltrasonicModel<T> {
    pub speed_of_sound_m_s: T,
    /// Mount height of the transducer above the pond bottom.
    pub sensor_height_m: T,
}

impl<T: Real> UltrasonicModel<T> {
    pub fn new(speed_of_sound_m_s: T, sensor_height_m: T) -> Result<Self> {
        if !(speed_of_sound_m_s > T::zero()) {
            return Err(domain("speed of sound must be positive"));
        }
        if !(sensor_height_m > T::zero()) {
            return Err(domain("sensor height must be positive"));
        }
        Ok(Self { speed_of_sound_m_s, sensor_height_m })
    }

    pub fn with_height(sensor_height_m: T) -> Result<Self> {
        Self::new(T::lit(340.0), sensor_height_m)
    }
}

/// One-way distance from a round-trip echo time: half the travel time
/// multiplied by the speed of sound.
pub fn ultrasonic_distance<T: Real>(travel_time_s: T, model: &UltrasonicModel<T>) -> Result<T> {
    if !(travel_time_s >= T::zero()) || !travel_time_s.is_finite() {
        return Err(domain(format!("echo travel time must be >= 0, got {travel_time_s}")));
    }
    Ok(travel_time_s / T::lit(2.0) * model.speed_of_sound_m_s)
}

/// Water depth below a downward-facing transducer.
pub fn depth_from_echo<T: Real>(travel_time_s: T, model: &UltrasonicModel<T>) -> Result<T> {
    let distance = ultrasonic_distance(travel_time_s, model)?;
    if distance > model.sensor_height_m {
        return Err(domain(format!(
            "echo distance {distance} m exceeds mount height {} m",
            model.sensor_height_m
        )));
    }
    Ok(model.sensor_height_m - distance)
}

/// Linear temperature compensation of conductivity about 25 °C.
pub fn conductivity_from_temperature<T: Real>(base_cond_25c: T, temp_c: T, coeff_per_c: T) -> Result<T> {
    if !(base_cond_25c > T::zero()) {
        return Err(domain("reference conductivity must be positive"));
    }
    if !(coeff_per_c > T::zero() && coeff_per_c <= T::lit(0.04)) {
        return Err(domain("temperature coefficient must lie in (0, 0.04]"));
    }
    if !temp_c.is_finite() {
        return Err(domain("temperature must be finite"));
    }
    Ok(base_cond_25c * (T::one() + coeff_per_c * (temp_c - T::lit(25.0))))
}

/// Snaps a temperature to the DS18B20 grid for the given resolution:
/// 0.5 °C at 9 bits down to 0.0625 °C at 12 bits.
pub fn quantize_temperature<T: Real>(temp_c: T, resolution_bits: u32) -> Result<T> {
    if !(9..=12).contains(&resolution_bits) {
        return Err(domain(format!("resolution must be 9-12 bits, got {resolution_bits}")));
    }
    if !(temp_c >= T::lit(-55.0) && temp_c <= T::lit(125.0)) {
        return Err(domain(format!("temperature {temp_c} outside -55..125 °C")));
    }
    let step = T::lit(2.0).powi(-((resolution_bits - 8) as i32));
    Ok(snap(temp_c, step))
}

/// Two-point linear calibration for the analog turbidity probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurbidityCalibration<T> {
    /// Output voltage in clear water (0 NTU).
    pub v_clear: T,
    /// Output voltage at `ntu_max`.
    pub v_opaque: T,
    pub ntu_max: T,
}

impl<T: Real> Default for TurbidityCalibration<T> {
    fn default() -> Self {
        Self { v_clear: T::lit(4.2), v_opaque: T::lit(2.5), ntu_max: T::lit(3000.0) }
    }
}

pub fn turbidity_from_voltage<T: Real>(volts: T, cal: &TurbidityCalibration<T>) -> Result<T> {
    if !(volts >= T::zero() && volts <= T::lit(4.5)) {
        return Err(domain(format!("turbidity voltage {volts} outside 0..4.5 V")));
    }
    if !(cal.v_opaque < cal.v_clear) {
        return Err(domain("calibration requires v_opaque < v_clear"));
    }
    let ntu = cal.ntu_max * (cal.v_clear - volts) / (cal.v_clear - cal.v_opaque);
    Ok(ntu.max(T::zero()).min(cal.ntu_max))
}
