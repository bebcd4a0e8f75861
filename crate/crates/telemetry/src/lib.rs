//! Channel store and HTTP feed API for pond sensor telemetry.
//!
//! Devices push readings with `POST /update?api_key=...&field1=...`; each
//! accepted write becomes a [`FeedEntry`] with a dense per-channel entry id.
//! Feeds are read back as CSV, JSON or XML, optionally with the sensor
//! warm-up window removed.

mod error;
mod export;
mod filter;
mod model;
mod server;
mod store;

pub use error::{Result, TelemetryError};
pub use export::{export_feed, parse_feed_csv, parse_feed_json, parse_feed_xml, FeedFormat};
pub use filter::{stabilization_filter, stabilization_filter_from, DEFAULT_WARMUP_S};
pub use model::{
    default_field_labels, format_timestamp, parse_timestamp, truncate_to_seconds, Channel, FeedEntry, FeedQuery,
    DEFAULT_FIELD_LABELS, DEFAULT_RESULTS, MAX_FIELDS, MAX_RESULTS, TIMESTAMP_FORMAT,
};
pub use server::{router, serve};
pub use store::Store;

/// Environment variable naming the storage root.
pub const DATA_DIR_ENV: &str = "PONDWATCH_DATA_DIR";
