//! Water-quality acceptance bands and the per-pond recommendation.

mod report;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Result};
use crate::sensor_sim::Parameter;
use crate::Real;

pub use report::{verdict_json, verdict_table};

/// Acceptance band for one parameter, inclusive at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealRange<T> {
    pub parameter: Parameter,
    pub lo: T,
    pub hi: T,
}

impl<T: Real> IdealRange<T> {
    pub fn new(parameter: Parameter, lo: T, hi: T) -> Result<Self> {
        if !(lo < hi) {
            return Err(validation(format!("ideal range for {parameter} needs lo < hi")));
        }
        Ok(Self { parameter, lo, hi })
    }

    pub fn contains(&self, v: T) -> bool {
        v >= self.lo && v <= self.hi
    }
}

/// The set of bands a pond is judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealRanges<T> {
    ranges: Vec<IdealRange<T>>,
}

impl<T: Real> Default for IdealRanges<T> {
    fn default() -> Self {
        let r = |p, lo, hi| IdealRange { parameter: p, lo: T::lit(lo), hi: T::lit(hi) };
        Self {
            ranges: vec![
                r(Parameter::Ph, 6.5, 8.5),
                r(Parameter::Temperature, 16.0, 24.0),
                r(Parameter::Turbidity, 0.0, 10.0),
                r(Parameter::Conductivity, 970.0, 1825.0),
                r(Parameter::Depth, 1.0, 5.0),
            ],
        }
    }
}

impl<T: Real> IdealRanges<T> {
    pub fn get(&self, parameter: Parameter) -> Option<&IdealRange<T>> {
        self.ranges.iter().find(|r| r.parameter == parameter)
    }

    /// Replaces (or adds) the band for one parameter.
    pub fn set(&mut self, range: IdealRange<T>) {
        match self.ranges.iter_mut().find(|r| r.parameter == range.parameter) {
            Some(slot) => *slot = range,
            None => self.ranges.push(range),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &IdealRange<T>> {
        self.ranges.iter()
    }
}

/// Survival zone of a pH reading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhZone {
    Death,
    NoReproduction,
    SlowGrowth,
    Critical,
    Ideal,
}

/// Zones: `<4` death, `[4,5]` no reproduction, `(5,6.5)` slow growth,
/// `[6.5,8.5]` ideal, `(8.5,10]` slow growth, `(10,11]` critical, `>11` death.
pub fn classify_ph<T: Real>(ph: T) -> Result<PhZone> {
    if !(ph >= T::zero() && ph <= T::lit(14.0)) {
        return Err(domain(format!("pH {ph} outside 0..14")));
    }
    let zone = if ph < T::lit(4.0) || ph > T::lit(11.0) {
        PhZone::Death
    } else if ph <= T::lit(5.0) {
        PhZone::NoReproduction
    } else if ph < T::lit(6.5) {
        PhZone::SlowGrowth
    } else if ph <= T::lit(8.5) {
        PhZone::Ideal
    } else if ph <= T::lit(10.0) {
        PhZone::SlowGrowth
    } else {
        PhZone::Critical
    };
    Ok(zone)
}

/// Dissolved-oxygen condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OxygenStatus {
    Healthy,
    Hazardous,
    EmergencyAeration,
    Critical,
}

pub fn classify_do<T: Real>(do_mg_l: T) -> Result<OxygenStatus> {
    if !(do_mg_l >= T::zero()) || !do_mg_l.is_finite() {
        return Err(domain(format!("dissolved oxygen {do_mg_l} must be >= 0")));
    }
    Ok(if do_mg_l >= T::lit(5.0) {
        OxygenStatus::Healthy
    } else if do_mg_l >= T::lit(4.0) {
        OxygenStatus::Hazardous
    } else if do_mg_l >= T::lit(2.0) {
        OxygenStatus::EmergencyAeration
    } else {
        OxygenStatus::Critical
    })
}

/// Order-statistic summary of a list of readings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadingSummary<T> {
    pub min: T,
    pub max: T,
    pub median: T,
    pub mean: T,
    pub count: usize,
}

pub fn summarize_readings<T: Real>(samples: &[T]) -> Result<ReadingSummary<T>> {
    if samples.is_empty() {
        return Err(validation("cannot summarize an empty sample list"));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(validation("samples must be finite"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = sorted.len();
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / T::lit(2.0)
    };
    let sum = sorted.iter().fold(T::zero(), |acc, &v| acc + v);
    Ok(ReadingSummary {
        min: sorted[0],
        max: sorted[n - 1],
        median,
        mean: sum / T::from_count(n as u64),
        count: n,
    })
}

/// Outcome of judging one parameter's samples against its band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterStatus<T> {
    pub parameter: Parameter,
    pub sample_count: usize,
    pub in_range_fraction: T,
    pub median: T,
    pub observed_range: [T; 2],
    pub ideal: [T; 2],
    pub pass: bool,
}

impl<T: Real> ParameterStatus<T> {
    /// Where the bulk of the readings sit relative to the band.
    pub fn direction(&self) -> &'static str {
        if self.median > self.ideal[1] {
            "above"
        } else if self.median < self.ideal[0] {
            "below"
        } else {
            "outside"
        }
    }
}

/// Passes when at least `threshold` of the samples are in band and the
/// median is in band. A fraction exactly equal to the threshold passes.
pub fn check_parameter<T: Real>(
    parameter: Parameter,
    samples: &[T],
    threshold: T,
    ranges: &IdealRanges<T>,
) -> Result<ParameterStatus<T>> {
    if !(threshold > T::zero() && threshold <= T::one()) {
        return Err(validation("threshold must lie in (0, 1]"));
    }
    let range = ranges
        .get(parameter)
        .ok_or_else(|| validation(format!("no ideal range configured for {parameter}")))?;
    let summary = summarize_readings(samples)?;
    let inside = samples.iter().filter(|&&v| range.contains(v)).count();
    let fraction = T::from_count(inside as u64) / T::from_count(samples.len() as u64);
    Ok(ParameterStatus {
        parameter,
        sample_count: samples.len(),
        in_range_fraction: fraction,
        median: summary.median,
        observed_range: [summary.min, summary.max],
        ideal: [range.lo, range.hi],
        pass: fraction >= threshold && range.contains(summary.median),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictConfig<T> {
    pub threshold: T,
    pub ranges: IdealRanges<T>,
}

impl<T: Real> Default for VerdictConfig<T> {
    fn default() -> Self {
        Self { threshold: T::lit(0.70), ranges: IdealRanges::default() }
    }
}

/// A parameter that is recorded and reported but does not influence the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordedParameter<T> {
    pub parameter: Parameter,
    pub summary: ReadingSummary<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PondVerdict<T> {
    pub pond_id: u8,
    pub statuses: Vec<ParameterStatus<T>>,
    pub recorded: Vec<RecordedParameter<T>>,
    /// Worst-case oxygen condition when dissolved oxygen was supplied.
    pub oxygen: Option<OxygenStatus>,
    pub recommended: bool,
    pub remarks: String,
}

impl<T: Real> PondVerdict<T> {
    pub fn status(&self, parameter: Parameter) -> Option<&ParameterStatus<T>> {
        self.statuses.iter().find(|s| s.parameter == parameter)
    }
}

fn depth_status<T: Real>(range: [T; 2], ideal: &IdealRange<T>) -> Result<ParameterStatus<T>> {
    let [lo, hi] = range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(validation("depth range must satisfy lo <= hi"));
    }
    let inside = [lo, hi].iter().filter(|&&v| ideal.contains(v)).count();
    Ok(ParameterStatus {
        parameter: Parameter::Depth,
        sample_count: 2,
        in_range_fraction: T::from_count(inside as u64) / T::lit(2.0),
        median: (lo + hi) / T::lit(2.0),
        observed_range: [lo, hi],
        ideal: [ideal.lo, ideal.hi],
        pass: inside == 2,
    })
}

/// Judges every supplied parameter and aggregates a recommendation.
///
/// A static `depth_range_m` must lie wholly inside the depth band and takes
/// precedence over depth samples; sampled depth is otherwise judged like any
/// other parameter. Dissolved oxygen, BOD and COD are recorded only.
pub fn evaluate_pond<T: Real>(
    pond_id: u8,
    samples: &BTreeMap<Parameter, Vec<T>>,
    depth_range_m: Option<[T; 2]>,
    config: &VerdictConfig<T>,
) -> Result<PondVerdict<T>> {
    let has_data = samples.values().any(|v| !v.is_empty()) || depth_range_m.is_some();
    if !has_data {
        return Err(validation(format!("no readings supplied for pond {pond_id}")));
    }

    let mut statuses = Vec::new();
    let mut recorded = Vec::new();
    let mut oxygen = None;
    for (&parameter, values) in samples {
        if values.is_empty() {
            continue;
        }
        match parameter {
            Parameter::Depth if depth_range_m.is_some() => {}
            Parameter::DissolvedOxygen | Parameter::Bod | Parameter::Cod => {
                let summary = summarize_readings(values)?;
                if parameter == Parameter::DissolvedOxygen {
                    oxygen = Some(classify_do(summary.min)?);
                }
                recorded.push(RecordedParameter { parameter, summary });
            }
            _ => statuses.push(check_parameter(parameter, values, config.threshold, &config.ranges)?),
        }
    }

    if let Some(range) = depth_range_m {
        let ideal = config
            .ranges
            .get(Parameter::Depth)
            .ok_or_else(|| validation("no ideal range configured for depth"))?;
        statuses.push(depth_status(range, ideal)?);
        statuses.sort_by_key(|s| s.parameter);
    }

    let failing: Vec<_> = statuses.iter().filter(|s| !s.pass).collect();
    let recommended = failing.is_empty() && !statuses.is_empty();
    let remarks = if recommended {
        "Recommended".to_string()
    } else if statuses.is_empty() {
        "Not Recommended: no judged parameters".to_string()
    } else {
        let reasons: Vec<String> = failing
            .iter()
            .map(|s| {
                format!(
                    "{} {}-{} {} ideal {}-{}",
                    s.parameter,
                    s.observed_range[0],
                    s.observed_range[1],
                    s.direction(),
                    s.ideal[0],
                    s.ideal[1]
                )
            })
            .collect();
        format!("Not Recommended: {}", reasons.join("; "))
    };

    Ok(PondVerdict { pond_id, statuses, recorded, oxygen, recommended, remarks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sensor_sim::load_fixture;
    use proptest::prelude::*;

    fn ranges() -> IdealRanges<f64> {
        IdealRanges::default()
    }

    #[test]
    fn ph_zone_examples() {
        assert_eq!(classify_ph(7.0).unwrap(), PhZone::Ideal);
        assert_eq!(classify_ph(3.9).unwrap(), PhZone::Death);
        assert_eq!(classify_ph(8.7).unwrap(), PhZone::SlowGrowth);
        assert!(classify_ph(-0.1).is_err());
        assert!(classify_ph(14.1).is_err());
    }

    #[test]
    fn ph_zone_boundaries() {
        let cases = [
            (4.0, PhZone::NoReproduction),
            (5.0, PhZone::NoReproduction),
            (6.5, PhZone::Ideal),
            (8.5, PhZone::Ideal),
            (10.0, PhZone::SlowGrowth),
            (11.0, PhZone::Critical),
            (0.0, PhZone::Death),
            (14.0, PhZone::Death),
        ];
        for (ph, zone) in cases {
            assert_eq!(classify_ph(ph).unwrap(), zone, "pH {ph}");
        }
        assert_eq!(classify_ph(5.0f32 + f32::EPSILON * 8.0).unwrap(), PhZone::SlowGrowth);
    }

    #[test]
    fn oxygen_examples() {
        assert_eq!(classify_do(6.79).unwrap(), OxygenStatus::Healthy);
        assert_eq!(classify_do(3.0).unwrap(), OxygenStatus::EmergencyAeration);
        assert_eq!(classify_do(1.9).unwrap(), OxygenStatus::Critical);
        assert_eq!(classify_do(4.0).unwrap(), OxygenStatus::Hazardous);
        assert_eq!(classify_do(5.0).unwrap(), OxygenStatus::Healthy);
        assert_eq!(classify_do(2.0).unwrap(), OxygenStatus::EmergencyAeration);
        assert!(classify_do(-0.5).is_err());
    }

    #[test]
    fn check_parameter_fixture_examples() {
        let p3 = check_parameter(Parameter::Ph, &load_fixture(3, Parameter::Ph).unwrap(), 0.70, &ranges()).unwrap();
        assert_eq!(p3.in_range_fraction, 0.70);
        assert!((p3.median - 6.97).abs() < 1e-12);
        assert!(p3.pass);

        let p2 = check_parameter(Parameter::Ph, &load_fixture(2, Parameter::Ph).unwrap(), 0.70, &ranges()).unwrap();
        assert_eq!(p2.in_range_fraction, 0.0);
        assert!(!p2.pass);
        assert_eq!(p2.direction(), "above");

        let t1 = check_parameter(Parameter::Turbidity, &load_fixture(1, Parameter::Turbidity).unwrap(), 0.70, &ranges())
            .unwrap();
        assert_eq!(t1.in_range_fraction, 1.0);
        assert!(t1.pass);
    }

    #[test]
    fn check_parameter_errors() {
        assert!(check_parameter::<f64>(Parameter::Ph, &[], 0.7, &ranges()).is_err());
        assert!(check_parameter(Parameter::Ph, &[7.0], 0.0, &ranges()).is_err());
        assert!(check_parameter(Parameter::Bod, &[7.0], 0.7, &ranges()).is_err());
    }

    #[test]
    fn threshold_edge_passes() {
        // 7 of 10 in range, median in range
        let samples = [6.0, 6.1, 6.2, 7.0, 7.1, 7.2, 7.3, 7.4, 7.5, 7.6];
        let s = check_parameter(Parameter::Ph, &samples, 0.7, &ranges()).unwrap();
        assert_eq!(s.in_range_fraction, 0.7);
        assert!(s.pass);
        let s = check_parameter(Parameter::Ph, &samples, 0.71, &ranges()).unwrap();
        assert!(!s.pass);
    }

    #[test]
    fn summary_examples() {
        let s = summarize_readings(&[1.0]).unwrap();
        assert_eq!((s.min, s.max, s.median, s.mean, s.count), (1.0, 1.0, 1.0, 1.0, 1));
        assert_eq!(summarize_readings(&[4.0, 1.0, 3.0, 2.0]).unwrap().median, 2.5);
        let p4 = summarize_readings(&load_fixture(4, Parameter::Ph).unwrap()).unwrap();
        assert_eq!((p4.min, p4.max), (6.51, 8.30));
        assert!(summarize_readings::<f64>(&[]).is_err());
    }

    fn fixture_samples(pond: u8) -> BTreeMap<Parameter, Vec<f64>> {
        crate::sensor_sim::FIXTURE_PARAMETERS
            .iter()
            .map(|&p| (p, load_fixture(pond, p).unwrap()))
            .collect()
    }

    #[test]
    fn fixture_ponds_reproduce_recommendations() {
        let depths = [[1.0, 2.0], [1.0, 2.0], [1.0, 2.0], [2.0, 4.0], [1.0, 3.0]];
        let cfg = VerdictConfig::default();
        let recommended: Vec<u8> = (1..=5u8)
            .filter(|&p| {
                evaluate_pond(p, &fixture_samples(p), Some(depths[usize::from(p) - 1]), &cfg)
                    .unwrap()
                    .recommended
            })
            .collect();
        assert_eq!(recommended, vec![1, 3, 4]);

        let v5 = evaluate_pond(5, &fixture_samples(5), Some([1.0, 3.0]), &cfg).unwrap();
        assert!(v5.remarks.contains("pH 3.84-3.95 below"), "{}", v5.remarks);
        let v2 = evaluate_pond(2, &fixture_samples(2), Some([1.0, 2.0]), &cfg).unwrap();
        assert!(v2.remarks.contains("pH 8.57-8.87 above"), "{}", v2.remarks);
    }

    #[test]
    fn depth_range_must_be_contained() {
        let mut s = BTreeMap::new();
        s.insert(Parameter::Ph, vec![7.0]);
        let cfg = VerdictConfig::default();
        assert!(evaluate_pond(1, &s, Some([1.0, 5.0]), &cfg).unwrap().recommended);
        let v = evaluate_pond(1, &s, Some([0.5, 2.0]), &cfg).unwrap();
        assert!(!v.recommended);
        assert!(v.remarks.contains("depth_m"));
    }

    #[test]
    fn sampled_depth_tolerates_stray_readings() {
        let mut s = BTreeMap::new();
        s.insert(Parameter::Ph, vec![7.0]);
        s.insert(Parameter::Depth, vec![0.98, 1.2, 1.5, 1.7, 1.9]);
        let v = evaluate_pond(1, &s, None, &VerdictConfig::default()).unwrap();
        assert!(v.recommended);
        let d = v.status(Parameter::Depth).unwrap();
        assert_eq!(d.sample_count, 5);
        assert_eq!(d.observed_range, [0.98, 1.9]);
        // A static range wins over samples.
        assert!(!evaluate_pond(1, &s, Some([0.5, 2.0]), &VerdictConfig::default()).unwrap().recommended);
    }

    #[test]
    fn bod_cod_do_never_affect_verdict() {
        let mut s = BTreeMap::new();
        s.insert(Parameter::Ph, vec![7.0]);
        s.insert(Parameter::Bod, vec![7.0]);
        s.insert(Parameter::Cod, vec![12.0]);
        s.insert(Parameter::DissolvedOxygen, vec![1.0]);
        let v = evaluate_pond(1, &s, None, &VerdictConfig::default()).unwrap();
        assert!(v.recommended);
        assert_eq!(v.recorded.len(), 3);
        assert_eq!(v.oxygen, Some(OxygenStatus::Critical));
    }

    #[test]
    fn no_data_is_rejected() {
        let s: BTreeMap<Parameter, Vec<f64>> = BTreeMap::new();
        assert!(evaluate_pond(1, &s, None, &VerdictConfig::default()).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let r = IdealRanges::<f32>::default();
        let s = check_parameter(Parameter::Ph, &[7.0f32, 6.9, 8.6], 0.6, &r).unwrap();
        assert!(s.pass);
    }

    proptest! {
        #[test]
        fn ideal_constant_list_passes(ph in 0.0f64..14.0, n in 1usize..20) {
            if classify_ph(ph).unwrap() == PhZone::Ideal {
                let s = check_parameter(Parameter::Ph, &vec![ph; n], 0.7, &ranges()).unwrap();
                prop_assert!(s.pass);
                prop_assert_eq!(s.in_range_fraction, 1.0);
            }
        }

        #[test]
        fn fraction_monotone(base in proptest::collection::vec(0.0f64..14.0, 1..30), extra in 0.0f64..14.0) {
            let r = ranges();
            let before = check_parameter(Parameter::Ph, &base, 0.7, &r).unwrap().in_range_fraction;
            let mut more = base.clone();
            more.push(extra);
            let after = check_parameter(Parameter::Ph, &more, 0.7, &r).unwrap().in_range_fraction;
            if r.get(Parameter::Ph).unwrap().contains(extra) {
                prop_assert!(after >= before);
            } else {
                prop_assert!(after <= before);
            }
        }
    }
}
