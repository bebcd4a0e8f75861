use std::fs;
use std::path::Path;

use chrono::{DateTime, Duration, Utc};
use pondwatch_core::sensor_sim::{simulate_pond_stream, PondProfile, ReadingSample};
use pondwatch_telemetry::{export_feed, parse_timestamp, stabilization_filter, Channel, FeedEntry, FeedFormat};

use super::feed::{feed_labels, field_of, FEED_PARAMETERS};
use crate::cli::SimulateArgs;
use crate::config::FileConfig;
use crate::error::{io_context, usage, CliError, Result};
use crate::output::{Context, OutputFormat};

pub const DEFAULT_DURATION_S: u64 = 3000;
pub const DEFAULT_INTERVAL_S: u64 = 150;
pub const DEFAULT_WARMUP_S: u64 = 180;
pub const DEFAULT_START: &str = "2020-12-20T20:50:00Z";

fn load_profile(path: &Path) -> Result<PondProfile> {
    let text = fs::read_to_string(path).map_err(io_context(format!("reading profile {}", path.display())))?;
    let profile: PondProfile = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| usage(format!("profile {}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| usage(format!("profile {}: {e}", path.display())))?
    };
    profile.validate()?;
    Ok(profile)
}

/// Groups per-parameter samples into one feed entry per tick.
pub fn samples_to_entries(samples: &[ReadingSample], start: DateTime<Utc>) -> Vec<FeedEntry> {
    let mut entries: Vec<FeedEntry> = Vec::new();
    let mut last_tick = None;
    for s in samples {
        if last_tick != Some(s.timestamp) {
            last_tick = Some(s.timestamp);
            entries.push(FeedEntry {
                entry_id: entries.len() as u64 + 1,
                created_at: start + Duration::seconds(s.timestamp as i64),
                fields: vec![None; FEED_PARAMETERS.len()],
            });
        }
        if let (Some(field), Some(entry)) = (field_of(s.parameter), entries.last_mut()) {
            entry.fields[field - 1] = Some(s.value);
        }
    }
    entries
}

fn post_entries(base: &str, api_key: &str, entries: &[FeedEntry]) -> Result<()> {
    let url = format!("{}/update", base.trim_end_matches('/'));
    for e in entries {
        let mut form: Vec<(String, String)> = vec![
            ("api_key".into(), api_key.to_string()),
            ("created_at".into(), pondwatch_telemetry::format_timestamp(&e.created_at)),
        ];
        for (i, v) in e.fields.iter().enumerate() {
            if let Some(v) = v {
                form.push((format!("field{}", i + 1), v.to_string()));
            }
        }
        let mut resp = ureq::post(&url)
            .send_form(form)
            .map_err(|err| CliError::Failed(format!("posting to {url}: {err}")))?;
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|err| CliError::Failed(format!("reading reply from {url}: {err}")))?;
        if body.trim() == "0" {
            return Err(CliError::Failed(format!("{url} rejected entry {}", e.entry_id)));
        }
    }
    Ok(())
}

pub fn run(args: SimulateArgs, cfg: &FileConfig, ctx: &Context) -> Result<()> {
    let pond: Option<u8> = cfg.or(args.pond, "pond")?;
    let profile_path: Option<std::path::PathBuf> = cfg.or(args.profile, "profile")?;
    let profile = match (pond, profile_path) {
        (Some(_), Some(_)) => return Err(usage("use either --pond or --profile, not both")),
        (Some(id), None) => PondProfile::builtin(id).map_err(|_| usage(format!("no built-in pond {id}; choose 1-5")))?,
        (None, Some(path)) => load_profile(&path)?,
        (None, None) => return Err(usage("simulate needs --pond <1-5> or --profile <file>")),
    };
    let duration = cfg.or(args.duration, "duration")?.unwrap_or(DEFAULT_DURATION_S);
    let interval = cfg.or(args.interval, "interval")?.unwrap_or(DEFAULT_INTERVAL_S);
    let warmup = cfg.or(args.warmup, "warmup")?.unwrap_or(DEFAULT_WARMUP_S);
    let start_text: String = cfg.or(args.start, "start")?.unwrap_or_else(|| DEFAULT_START.to_string());
    let start = parse_timestamp(&start_text).map_err(|e| usage(e.to_string()))?;
    if duration == 0 || interval == 0 {
        return Err(usage("--duration and --interval must be positive"));
    }

    let samples = simulate_pond_stream(&profile, warmup + duration, interval, ctx.seed)?;
    let entries = stabilization_filter(&samples_to_entries(&samples, start), warmup);

    let channel = Channel {
        channel_id: u64::from(profile.pond_id),
        name: format!("pond-{} simulation", profile.pond_id),
        field_labels: feed_labels(),
        write_key: String::new(),
        created_at: start,
    };
    let format = match ctx.format {
        OutputFormat::Json => FeedFormat::Json,
        OutputFormat::Text | OutputFormat::Csv => FeedFormat::Csv,
    };
    ctx.emit(&export_feed(&channel, &entries, format, None)?)?;

    let post: Option<String> = cfg.or(args.post, "post")?;
    if let Some(base) = post {
        let key: String = cfg
            .or(args.api_key, "api_key")?
            .ok_or_else(|| usage("--post needs --api-key"))?;
        post_entries(&base, &key, &entries)?;
        eprintln!("pondwatch: posted {} entries to {base}", entries.len());
    }
    Ok(())
}
