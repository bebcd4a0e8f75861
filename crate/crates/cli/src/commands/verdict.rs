use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use pondwatch_core::sensor_sim::{load_fixture, Parameter, PondProfile, FIXTURE_PARAMETERS, FIXTURE_PONDS};
use pondwatch_core::suitability::{evaluate_pond, verdict_json, verdict_table, VerdictConfig};
use pondwatch_core::PondVerdict;
use pondwatch_telemetry::{parse_feed_csv, parse_feed_json, parse_feed_xml, stabilization_filter, FeedEntry};

use super::feed::samples_from_feed;
use crate::cli::VerdictArgs;
use crate::config::FileConfig;
use crate::error::{io_context, usage, CliError, Result};
use crate::output::{Context, OutputFormat};

type Samples = BTreeMap<Parameter, Vec<f64>>;

/// One pond's readings plus an optional static depth range.
struct PondInput {
    pond_id: u8,
    samples: Samples,
    depth: Option<[f64; 2]>,
}

fn builtin_depth(pond_id: u8) -> Option<[f64; 2]> {
    PondProfile::builtin(pond_id).ok().map(|p| p.depth_range_m)
}

fn fixture_inputs() -> Result<Vec<PondInput>> {
    (1..=FIXTURE_PONDS)
        .map(|pond_id| {
            let mut samples = Samples::new();
            for p in FIXTURE_PARAMETERS {
                samples.insert(p, load_fixture(pond_id, p)?);
            }
            Ok(PondInput { pond_id, samples, depth: builtin_depth(pond_id) })
        })
        .collect()
}

fn parse_depth_range(s: &str) -> Result<[f64; 2]> {
    let parts: Vec<&str> = s.split([',', '-']).map(str::trim).filter(|p| !p.is_empty()).collect();
    match parts.as_slice() {
        [lo, hi] => {
            let lo: f64 = lo.parse().map_err(|_| usage(format!("bad depth range '{s}'")))?;
            let hi: f64 = hi.parse().map_err(|_| usage(format!("bad depth range '{s}'")))?;
            Ok([lo, hi])
        }
        _ => Err(usage(format!("depth range must look like 'lo,hi', got '{s}'"))),
    }
}

/// Readings in the fixture layout `pond_id,parameter,sample_index,value`.
fn parse_fixture_layout(text: &str) -> Result<Vec<PondInput>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut ponds: BTreeMap<u8, BTreeMap<Parameter, Vec<(u64, f64)>>> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| CliError::Failed(format!("fixture CSV: {e}")))?;
        if rec.len() != 4 {
            return Err(CliError::Failed(format!("fixture CSV row has {} columns, expected 4", rec.len())));
        }
        let bad = |what: &str| CliError::Failed(format!("fixture CSV: bad {what} in row {:?}", rec));
        let pond: u8 = rec[0].trim().parse().map_err(|_| bad("pond_id"))?;
        let parameter: Parameter = rec[1].trim().parse().map_err(|_| bad("parameter"))?;
        let index: u64 = rec[2].trim().parse().map_err(|_| bad("sample_index"))?;
        let value: f64 = rec[3].trim().parse().map_err(|_| bad("value"))?;
        ponds.entry(pond).or_default().entry(parameter).or_default().push((index, value));
    }
    Ok(ponds
        .into_iter()
        .map(|(pond_id, params)| {
            let samples = params
                .into_iter()
                .map(|(p, mut v)| {
                    v.sort_by_key(|(i, _)| *i);
                    (p, v.into_iter().map(|(_, x)| x).collect())
                })
                .collect();
            PondInput { pond_id, samples, depth: builtin_depth(pond_id) }
        })
        .collect())
}

fn parse_feed(text: &str, kind: &str) -> Result<Vec<FeedEntry>> {
    Ok(match kind {
        "json" => parse_feed_json(text)?,
        "xml" => parse_feed_xml(text)?,
        _ => parse_feed_csv(text.as_bytes())?,
    })
}

fn feed_input(pond_id: u8, entries: Vec<FeedEntry>, warmup: u64) -> PondInput {
    let entries = if warmup > 0 { stabilization_filter(&entries, warmup) } else { entries };
    PondInput { pond_id, samples: samples_from_feed(&entries), depth: None }
}

fn kind_of(name: &str) -> &str {
    let path = name.split(['?', '#']).next().unwrap_or(name);
    match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some("json") => "json",
        Some("xml") => "xml",
        _ => "csv",
    }
}

fn fetch(url: &str) -> Result<String> {
    let mut resp = ureq::get(url).call().map_err(|e| CliError::Failed(format!("fetching {url}: {e}")))?;
    resp.body_mut()
        .read_to_string()
        .map_err(|e| CliError::Failed(format!("reading {url}: {e}")))
}

fn verdict_csv(verdicts: &[PondVerdict]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let header = [
        "pond_id", "parameter", "sample_count", "min", "max", "median", "in_range_fraction", "ideal_min", "ideal_max",
        "pass", "recommended", "remarks",
    ];
    let fail = |e: csv::Error| CliError::Failed(e.to_string());
    w.write_record(header).map_err(fail)?;
    for v in verdicts {
        for s in &v.statuses {
            w.write_record([
                v.pond_id.to_string(),
                s.parameter.to_string(),
                s.sample_count.to_string(),
                s.observed_range[0].to_string(),
                s.observed_range[1].to_string(),
                s.median.to_string(),
                format!("{:.4}", s.in_range_fraction),
                s.ideal[0].to_string(),
                s.ideal[1].to_string(),
                s.pass.to_string(),
                v.recommended.to_string(),
                v.remarks.clone(),
            ])
            .map_err(fail)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failed(e.to_string()))
}

pub fn run(args: VerdictArgs, cfg: &FileConfig, ctx: &Context) -> Result<()> {
    let warmup = cfg.or(args.warmup, "warmup")?.unwrap_or(0);
    let mut config = VerdictConfig::<f64>::default();
    if let Some(t) = cfg.or(args.threshold, "threshold")? {
        if !(0.0..=1.0).contains(&t) {
            return Err(usage("--threshold must lie in [0, 1]"));
        }
        config.threshold = t;
    }
    let depth_override: Option<String> = cfg.or(args.depth_range, "depth_range")?;
    let depth_override = depth_override.as_deref().map(parse_depth_range).transpose()?;

    let mut inputs = Vec::new();
    if args.fixtures {
        inputs = fixture_inputs()?;
    }
    let single = args.input.len() == 1;
    for (i, path) in args.input.iter().enumerate() {
        let text = fs::read_to_string(path).map_err(io_context(format!("reading {}", path.display())))?;
        if text.trim().is_empty() {
            return Err(CliError::Failed(format!("{}: input is empty", path.display())));
        }
        if text.starts_with("pond_id,") {
            inputs.extend(parse_fixture_layout(&text)?);
        } else {
            let pond_id = if single { args.pond.unwrap_or(1) } else { i as u8 + 1 };
            let entries = parse_feed(&text, kind_of(&path.to_string_lossy()))?;
            inputs.push(feed_input(pond_id, entries, warmup));
        }
    }
    if let Some(url) = &args.url {
        let entries = parse_feed(&fetch(url)?, kind_of(url))?;
        inputs.push(feed_input(args.pond.unwrap_or(1), entries, warmup));
    }

    let verdicts = inputs
        .into_iter()
        .map(|p| evaluate_pond(p.pond_id, &p.samples, depth_override.or(p.depth), &config))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let rendered = match ctx.format {
        OutputFormat::Text => verdict_table(&verdicts),
        OutputFormat::Json => verdict_json(&verdicts),
        OutputFormat::Csv => verdict_csv(&verdicts)?,
    };
    ctx.emit(&rendered)
}
