//! Mapping between feed fields and water parameters.

use std::collections::BTreeMap;

use pondwatch_core::sensor_sim::Parameter;
use pondwatch_telemetry::FeedEntry;

/// Parameter carried by field N is `FEED_PARAMETERS[N - 1]`.
pub const FEED_PARAMETERS: [Parameter; 5] = [
    Parameter::Turbidity,
    Parameter::Temperature,
    Parameter::Ph,
    Parameter::Depth,
    Parameter::Conductivity,
];

pub const FEED_LABELS: [&str; 5] = ["Turbidity", "Temperature", "PH", "Depth", "Conductivity"];

pub fn feed_labels() -> Vec<String> {
    FEED_LABELS.iter().map(|s| s.to_string()).collect()
}

pub fn field_of(parameter: Parameter) -> Option<usize> {
    FEED_PARAMETERS.iter().position(|&p| p == parameter).map(|i| i + 1)
}

/// Collects per-parameter samples from feed entries, in entry order.
pub fn samples_from_feed(entries: &[FeedEntry]) -> BTreeMap<Parameter, Vec<f64>> {
    let mut out: BTreeMap<Parameter, Vec<f64>> = BTreeMap::new();
    for e in entries {
        for (i, &p) in FEED_PARAMETERS.iter().enumerate() {
            if let Some(v) = e.field(i + 1) {
                out.entry(p).or_default().push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use pondwatch_telemetry::parse_timestamp;

    #[test]
    fn field_numbers() {
        assert_eq!(field_of(Parameter::Turbidity), Some(1));
        assert_eq!(field_of(Parameter::Ph), Some(3));
        assert_eq!(field_of(Parameter::Conductivity), Some(5));
        assert_eq!(field_of(Parameter::Bod), None);
    }

    #[test]
    fn samples_follow_fields() {
        let t = parse_timestamp("2020-12-20T20:50:00Z").unwrap();
        let entries = vec![
            FeedEntry { entry_id: 1, created_at: t, fields: vec![Some(3.56), None, Some(7.67)] },
            FeedEntry { entry_id: 2, created_at: t, fields: vec![Some(3.57), Some(21.5), Some(7.7), None, Some(1200.0)] },
        ];
        let s = samples_from_feed(&entries);
        assert_eq!(s[&Parameter::Turbidity], vec![3.56, 3.57]);
        assert_eq!(s[&Parameter::Ph], vec![7.67, 7.7]);
        assert_eq!(s[&Parameter::Temperature], vec![21.5]);
        assert_eq!(s[&Parameter::Conductivity], vec![1200.0]);
        assert!(!s.contains_key(&Parameter::Depth));
    }
}
