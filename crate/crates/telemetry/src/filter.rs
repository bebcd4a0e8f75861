use chrono::{DateTime, Utc};

use crate::model::FeedEntry;

pub const DEFAULT_WARMUP_S: u64 = 180;

/// Drops entries recorded before `first.created_at + warmup_s`, treating the
/// first entry as the start of the session. The boundary itself is kept.
pub fn stabilization_filter(entries: &[FeedEntry], warmup_s: u64) -> Vec<FeedEntry> {
    match entries.first() {
        Some(first) => stabilization_filter_from(entries, first.created_at, warmup_s),
        None => Vec::new(),
    }
}

/// Same as [`stabilization_filter`] with an explicit session start. For a
/// fixed start this is idempotent, unlike re-anchoring on whatever entry
/// happens to come first after a previous pass.
pub fn stabilization_filter_from(entries: &[FeedEntry], session_start: DateTime<Utc>, warmup_s: u64) -> Vec<FeedEntry> {
    let cutoff = session_start.timestamp().saturating_add(warmup_s as i64);
    entries.iter().filter(|e| e.created_at.timestamp() >= cutoff).cloned().collect()
}
