use chrono::{DateTime, NaiveDateTime, SubsecRound, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

pub const MAX_FIELDS: usize = 8;
pub const DEFAULT_RESULTS: usize = 100;
pub const MAX_RESULTS: usize = 8000;
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

/// Field labels of the fish-farm channel.
pub const DEFAULT_FIELD_LABELS: [&str; 4] = ["Turbidity", "Temperature", "PH", "Depth"];

pub fn default_field_labels() -> Vec<String> {
    DEFAULT_FIELD_LABELS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub channel_id: u64,
    pub name: String,
    pub field_labels: Vec<String>,
    pub write_key: String,
    #[serde(with = "timestamp")]
    pub created_at: DateTime<Utc>,
}

impl Channel {
    pub fn validate_labels(labels: &[String]) -> Result<()> {
        if labels.is_empty() || labels.len() > MAX_FIELDS {
            return Err(validation(format!(
                "a channel needs between 1 and {MAX_FIELDS} field labels, got {}",
                labels.len()
            )));
        }
        Ok(())
    }
}

/// One timestamped row of a channel feed. `fields[i]` holds field `i + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedEntry {
    pub entry_id: u64,
    #[serde(with = "timestamp")]
    pub created_at: DateTime<Utc>,
    pub fields: Vec<Option<f64>>,
}

impl FeedEntry {
    /// Value of a 1-based field index.
    pub fn field(&self, index: usize) -> Option<f64> {
        index.checked_sub(1).and_then(|i| self.fields.get(i).copied().flatten())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeedQuery {
    pub results: Option<usize>,
    pub start: Option<DateTime<Utc>>,
    pub end: Option<DateTime<Utc>>,
    /// 1-based field index to project onto.
    pub field: Option<usize>,
    /// Drop entries inside the warm-up window, in seconds.
    pub warmup_s: Option<u64>,
}

pub fn truncate_to_seconds(t: DateTime<Utc>) -> DateTime<Utc> {
    t.trunc_subsecs(0)
}

pub fn format_timestamp(t: &DateTime<Utc>) -> String {
    t.format(TIMESTAMP_FORMAT).to_string()
}

/// Accepts RFC 3339 or `YYYY-MM-DD HH:MM:SS` (taken as UTC).
pub fn parse_timestamp(s: &str) -> Result<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M:%S"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(t.and_utc());
        }
    }
    Err(validation(format!("invalid timestamp '{s}'")))
}

pub(crate) mod timestamp {
    use chrono::{DateTime, Utc};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_timestamp(t))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_timestamp(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    #[test]
    fn timestamp_formats() {
        let t = Utc.with_ymd_and_hms(2020, 12, 20, 20, 50, 0).unwrap();
        assert_eq!(format_timestamp(&t), "2020-12-20T20:50:00Z");
        assert_eq!(parse_timestamp("2020-12-20T20:50:00Z").unwrap(), t);
        assert_eq!(parse_timestamp("2020-12-20 20:50:00").unwrap(), t);
        assert_eq!(parse_timestamp("2020-12-20T22:50:00+02:00").unwrap(), t);
        assert!(parse_timestamp("yesterday").is_err());
    }

    #[test]
    fn subseconds_truncate() {
        let t = parse_timestamp("2020-12-20T20:50:00.999Z").unwrap();
        assert_eq!(format_timestamp(&truncate_to_seconds(t)), "2020-12-20T20:50:00Z");
        assert_eq!(truncate_to_seconds(t).timestamp_subsec_nanos(), 0);
    }

    #[test]
    fn label_limits() {
        assert!(Channel::validate_labels(&default_field_labels()).is_ok());
        assert!(Channel::validate_labels(&[]).is_err());
        let nine: Vec<String> = (0..9).map(|i| format!("f{i}")).collect();
        assert!(Channel::validate_labels(&nine).is_err());
    }

    #[test]
    fn field_lookup_is_one_based() {
        let e = FeedEntry {
            entry_id: 1,
            created_at: Utc.timestamp_opt(0, 0).unwrap(),
            fields: vec![Some(3.56), None, Some(7.67)],
        };
        assert_eq!(e.field(1), Some(3.56));
        assert_eq!(e.field(2), None);
        assert_eq!(e.field(3), Some(7.67));
        assert_eq!(e.field(0), None);
        assert_eq!(e.field(9), None);
    }
}
