use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use rand::distr::{Alphanumeric, SampleString};

use crate::error::{validation, Result, TelemetryError};
use crate::filter::stabilization_filter;
use crate::model::{truncate_to_seconds, Channel, FeedEntry, FeedQuery, DEFAULT_RESULTS, MAX_RESULTS};

const CHANNEL_FILE: &str = "channel.json";
const FEED_FILE: &str = "feed.ndjson";
const WRITE_KEY_LEN: usize = 16;

struct ChannelState {
    channel: Channel,
    entries: RwLock<Vec<FeedEntry>>,
    /// Serializes appends so entry ids stay dense; holds the open log file.
    log: Mutex<Option<File>>,
}

/// Channel registry with one append-only log per channel.
///
/// Without a data directory everything lives in memory.
pub struct Store {
    root: Option<PathBuf>,
    channels: RwLock<BTreeMap<u64, Arc<ChannelState>>>,
    keys: RwLock<HashMap<String, u64>>,
    create_lock: Mutex<()>,
}

impl Store {
    pub fn in_memory() -> Self {
        Self {
            root: None,
            channels: RwLock::new(BTreeMap::new()),
            keys: RwLock::new(HashMap::new()),
            create_lock: Mutex::new(()),
        }
    }

    /// Opens (creating if needed) a store rooted at `dir` and replays every
    /// channel log found there.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let root = dir.as_ref().to_path_buf();
        let channels_dir = root.join("channels");
        fs::create_dir_all(&channels_dir)?;
        let store = Self { root: Some(root), ..Self::in_memory() };
        let mut dirs: Vec<PathBuf> = fs::read_dir(&channels_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.join(CHANNEL_FILE).is_file())
            .collect();
        dirs.sort();
        for dir in dirs {
            let channel: Channel = serde_json::from_str(&fs::read_to_string(dir.join(CHANNEL_FILE))?)?;
            let (entries, valid_len) = replay_log(&dir.join(FEED_FILE))?;
            let log = OpenOptions::new().create(true).append(true).open(dir.join(FEED_FILE))?;
            log.set_len(valid_len)?;
            store.insert(channel, entries, Some(log));
        }
        Ok(store)
    }

    pub fn data_dir(&self) -> Option<&Path> {
        self.root.as_deref()
    }

    fn insert(&self, channel: Channel, entries: Vec<FeedEntry>, log: Option<File>) {
        let id = channel.channel_id;
        self.keys.write().expect("key index poisoned").insert(channel.write_key.clone(), id);
        let state = ChannelState { channel, entries: RwLock::new(entries), log: Mutex::new(log) };
        self.channels.write().expect("channel index poisoned").insert(id, Arc::new(state));
    }

    fn state(&self, channel_id: u64) -> Result<Arc<ChannelState>> {
        self.channels
            .read()
            .expect("channel index poisoned")
            .get(&channel_id)
            .cloned()
            .ok_or_else(|| TelemetryError::NotFound(format!("channel {channel_id}")))
    }

    pub fn create_channel(&self, name: &str, field_labels: Vec<String>) -> Result<Channel> {
        Channel::validate_labels(&field_labels)?;
        let _guard = self.create_lock.lock().expect("create lock poisoned");
        let channel_id = self.channels.read().expect("channel index poisoned").keys().next_back().map_or(1, |id| id + 1);
        let mut rng = rand::rng();
        let write_key = loop {
            let key = Alphanumeric.sample_string(&mut rng, WRITE_KEY_LEN).to_ascii_uppercase();
            if !self.keys.read().expect("key index poisoned").contains_key(&key) {
                break key;
            }
        };
        let channel = Channel {
            channel_id,
            name: name.to_string(),
            field_labels,
            write_key,
            created_at: truncate_to_seconds(Utc::now()),
        };
        let log = match &self.root {
            Some(root) => {
                let dir = root.join("channels").join(channel_id.to_string());
                fs::create_dir_all(&dir)?;
                let tmp = dir.join(format!("{CHANNEL_FILE}.tmp"));
                fs::write(&tmp, serde_json::to_vec_pretty(&channel)?)?;
                fs::rename(&tmp, dir.join(CHANNEL_FILE))?;
                Some(OpenOptions::new().create(true).append(true).open(dir.join(FEED_FILE))?)
            }
            None => None,
        };
        self.insert(channel.clone(), Vec::new(), log);
        Ok(channel)
    }

    pub fn channel(&self, channel_id: u64) -> Result<Channel> {
        Ok(self.state(channel_id)?.channel.clone())
    }

    pub fn channels(&self) -> Vec<Channel> {
        self.channels.read().expect("channel index poisoned").values().map(|s| s.channel.clone()).collect()
    }

    /// Appends an entry. `values` maps 1-based field indices to readings.
    pub fn write_update(
        &self,
        write_key: &str,
        values: &BTreeMap<usize, f64>,
        timestamp: Option<DateTime<Utc>>,
    ) -> Result<FeedEntry> {
        let id = *self.keys.read().expect("key index poisoned").get(write_key).ok_or(TelemetryError::Unauthorized)?;
        let state = self.state(id)?;
        let n_fields = state.channel.field_labels.len();
        if values.is_empty() {
            return Err(validation("at least one field value is required"));
        }
        let mut fields = vec![None; n_fields];
        for (&index, &v) in values {
            if index == 0 || index > n_fields {
                return Err(validation(format!("field{index} is outside 1..={n_fields}")));
            }
            if !v.is_finite() {
                return Err(validation(format!("field{index} is not a finite number")));
            }
            fields[index - 1] = Some(v);
        }
        let created_at = truncate_to_seconds(timestamp.unwrap_or_else(Utc::now));

        let mut log = state.log.lock().expect("channel log poisoned");
        let entry_id = state.entries.read().expect("feed poisoned").len() as u64 + 1;
        let entry = FeedEntry { entry_id, created_at, fields };
        if let Some(file) = log.as_mut() {
            let mut line = serde_json::to_vec(&entry)?;
            line.push(b'\n');
            file.write_all(&line)?;
            file.flush()?;
        }
        state.entries.write().expect("feed poisoned").push(entry.clone());
        Ok(entry)
    }

    pub fn read_feed(&self, channel_id: u64, query: &FeedQuery) -> Result<Vec<FeedEntry>> {
        let state = self.state(channel_id)?;
        if let Some(f) = query.field {
            if f == 0 || f > state.channel.field_labels.len() {
                return Err(TelemetryError::NotFound(format!("field{f} of channel {channel_id}")));
            }
        }
        let snapshot = state.entries.read().expect("feed poisoned").clone();
        let stable = match query.warmup_s {
            Some(w) => stabilization_filter(&snapshot, w),
            None => snapshot,
        };
        let mut selected: Vec<FeedEntry> = stable
            .into_iter()
            .filter(|e| query.start.is_none_or(|s| e.created_at >= s))
            .filter(|e| query.end.is_none_or(|t| e.created_at <= t))
            .filter_map(|e| match query.field {
                Some(f) => e.field(f).map(|_| project(e, f)),
                None => Some(e),
            })
            .collect();
        let limit = query.results.unwrap_or(DEFAULT_RESULTS).min(MAX_RESULTS);
        if selected.len() > limit {
            selected.drain(..selected.len() - limit);
        }
        Ok(selected)
    }
}

fn project(mut entry: FeedEntry, field: usize) -> FeedEntry {
    for (i, v) in entry.fields.iter_mut().enumerate() {
        if i + 1 != field {
            *v = None;
        }
    }
    entry
}

/// Reads a feed log, returning its entries and the byte length of the
/// complete lines. A final line without a newline is a torn write from a
/// crash and is ignored; any other malformed line is an error.
fn replay_log(path: &Path) -> Result<(Vec<FeedEntry>, u64)> {
    if !path.exists() {
        return Ok((Vec::new(), 0));
    }
    let mut valid_len = 0u64;
    let mut reader = BufReader::new(File::open(path)?);
    let mut entries: Vec<FeedEntry> = Vec::new();
    let mut line = String::new();
    loop {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        if !line.ends_with('\n') {
            break;
        }
        let entry: FeedEntry = serde_json::from_str(line.trim_end())?;
        if entry.entry_id != entries.len() as u64 + 1 {
            return Err(TelemetryError::Serialization(format!(
                "{}: expected entry {} but found {}",
                path.display(),
                entries.len() + 1,
                entry.entry_id
            )));
        }
        entries.push(entry);
        valid_len += line.len() as u64;
    }
    Ok((entries, valid_len))
}
