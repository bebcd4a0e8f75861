//! End-to-end acceptance checks, one line per criterion.
//!
//! Run with `cargo test -p pondwatch --test acceptance`. Each criterion prints
//! `PASS` or `FAIL` with its measured values. The process exits non-zero when
//! any criterion fails, except for the known reference-table cells listed in
//! [`KNOWN_TABLE_DISCREPANCIES`], which are reported as `FAIL` but tolerated.

use std::collections::BTreeSet;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use chrono::{DateTime, TimeZone, Utc};
use pondwatch_core::metrics::{
    accuracy, class_metrics, kappa, precision, recall, tp_fp_rates, ConfusionMatrix, Report,
};
use pondwatch_core::ml::{
    cross_validate, generate_labeled_dataset, train, train_j48, train_random_forest, AlgorithmSpec, Dataset,
    ForestParams, J48Params, ModelFile, SpeciesConfig,
};
use pondwatch_core::sensor_sim::{ultrasonic_distance, UltrasonicModel};
use pondwatch_core::suitability::{classify_do, classify_ph, OxygenStatus, PhZone};
use pondwatch_core::metrics::rank_models;
use pondwatch_telemetry::{parse_feed_csv, parse_feed_json, parse_feed_xml, stabilization_filter_from, FeedEntry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const EXACT_TOL: f64 = 1e-12;
const TABLE_DECIMAL_TOL: f64 = 0.005;
const VERDICT_BUDGET: Duration = Duration::from_secs(1);
const ORACLE_BUDGET: Duration = Duration::from_secs(5);
const FLOOR_BUDGET: Duration = Duration::from_secs(60);
const RANKING_BUDGET: Duration = Duration::from_secs(300);
const SERVICE_BUDGET: Duration = Duration::from_secs(10);
const FLOOR_ACCURACY: f64 = 0.95;
const RANKING_NOISE: f64 = 0.25;
const RF_GE_J48_MIN: usize = 7;
const RF_FIRST_MIN: usize = 6;

/// Reference pond-summary cells that contradict the raw fixture readings:
/// (pond, parameter, summary value, reading).
const KNOWN_TABLE_DISCREPANCIES: [(u8, &str, &str, &str); 4] = [
    (4, "temperature max", "21.44", "21.50"),
    (4, "conductivity min", "1193", "1190"),
    (5, "temperature min", "21.06", "21.00"),
    (5, "conductivity min", "1190", "1186"),
];

struct Outcome {
    pass: bool,
    detail: String,
    tolerated: bool,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into(), tolerated: false }
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pondwatch")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn pondwatch")
}

fn stdout_of(args: &[&str]) -> Result<String, String> {
    let out = run(args);
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(String::from_utf8(out.stdout).expect("utf-8 stdout"))
}

struct TableRow {
    pond: u8,
    ph: [f64; 2],
    temperature: [f64; 2],
    turbidity: [f64; 2],
    depth: [f64; 2],
    conductivity: [i64; 2],
    recommended: bool,
}

const REFERENCE_SUMMARY: [TableRow; 5] = [
    TableRow {
        pond: 1,
        ph: [6.02, 8.39],
        temperature: [17.50, 17.75],
        turbidity: [3.55, 3.57],
        depth: [1.0, 2.0],
        conductivity: [989, 1003],
        recommended: true,
    },
    TableRow {
        pond: 2,
        ph: [8.57, 8.87],
        temperature: [17.75, 18.00],
        turbidity: [3.41, 3.50],
        depth: [1.0, 2.0],
        conductivity: [1003, 1017],
        recommended: false,
    },
    TableRow {
        pond: 3,
        ph: [6.00, 7.83],
        temperature: [20.87, 21.06],
        turbidity: [3.31, 3.49],
        depth: [1.0, 2.0],
        conductivity: [1179, 1190],
        recommended: true,
    },
    TableRow {
        pond: 4,
        ph: [6.51, 8.30],
        temperature: [21.06, 21.44],
        turbidity: [3.60, 3.62],
        depth: [2.0, 4.0],
        conductivity: [1193, 1215],
        recommended: true,
    },
    TableRow {
        pond: 5,
        ph: [3.84, 3.95],
        temperature: [21.06, 21.25],
        turbidity: [3.56, 3.58],
        depth: [1.0, 3.0],
        conductivity: [1190, 1201],
        recommended: false,
    },
];

fn observed(pond: &serde_json::Value, parameter: &str) -> Option<[f64; 2]> {
    let status = pond["statuses"].as_array()?.iter().find(|s| s["parameter"] == parameter)?;
    let r = status["observed_range"].as_array()?;
    Some([r[0].as_f64()?, r[1].as_f64()?])
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let text = match stdout_of(&["verdict", "--fixtures", "--format", "json"]) {
        Ok(t) => t,
        Err(e) => return Outcome::new(false, e),
    };
    let elapsed = started.elapsed();
    let doc: serde_json::Value = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => return Outcome::new(false, format!("verdict JSON did not parse: {e}")),
    };
    let ponds = doc["ponds"].as_array().cloned().unwrap_or_default();

    let mut structural = Vec::new();
    let mut cell_mismatches: Vec<(u8, String, String, String)> = Vec::new();
    let mut cells_checked = 0;

    for row in &REFERENCE_SUMMARY {
        let Some(pond) = ponds.iter().find(|p| p["pond_id"] == row.pond) else {
            structural.push(format!("pond {} missing", row.pond));
            continue;
        };
        if pond["recommended"].as_bool() != Some(row.recommended) {
            structural.push(format!("pond {} recommendation {}", row.pond, pond["recommended"]));
        }
        let decimal = [("pH", "pH", row.ph), ("temperature_C", "temperature", row.temperature), ("turbidity_NTU", "turbidity", row.turbidity), ("depth_m", "depth", row.depth)];
        for (key, label, want) in decimal {
            let Some(got) = observed(pond, key) else {
                structural.push(format!("pond {} has no {label}", row.pond));
                continue;
            };
            for (i, end) in ["min", "max"].iter().enumerate() {
                cells_checked += 1;
                if (got[i] - want[i]).abs() >= TABLE_DECIMAL_TOL {
                    cell_mismatches.push((row.pond, format!("{label} {end}"), format!("{:.2}", want[i]), format!("{:.2}", got[i])));
                }
            }
        }
        match observed(pond, "conductivity_uS_cm") {
            None => structural.push(format!("pond {} has no conductivity", row.pond)),
            Some(got) => {
                for (i, end) in ["min", "max"].iter().enumerate() {
                    cells_checked += 1;
                    let truncated = got[i].trunc() as i64;
                    if truncated != row.conductivity[i] {
                        cell_mismatches.push((row.pond, format!("conductivity {end}"), row.conductivity[i].to_string(), truncated.to_string()));
                    }
                }
            }
        }
    }

    let remark = |id: u8| {
        ponds.iter().find(|p| p["pond_id"] == id).and_then(|p| p["remarks"].as_str()).unwrap_or("").to_string()
    };
    let r2 = remark(2);
    let r5 = remark(5);
    if !(r2.contains("pH") && r2.contains("above")) {
        structural.push(format!("pond 2 remark {r2:?} does not cite pH above ideal"));
    }
    if !(r5.contains("pH") && r5.contains("below")) {
        structural.push(format!("pond 5 remark {r5:?} does not cite pH below ideal"));
    }
    if elapsed >= VERDICT_BUDGET {
        structural.push(format!("runtime {elapsed:?} over {VERDICT_BUDGET:?}"));
    }

    let known: BTreeSet<(u8, String, String, String)> = KNOWN_TABLE_DISCREPANCIES
        .iter()
        .map(|&(p, c, t, l)| (p, c.to_string(), t.to_string(), l.to_string()))
        .collect();
    let found: BTreeSet<_> = cell_mismatches.iter().cloned().collect();
    let pass = structural.is_empty() && found.is_empty();
    let mut detail = format!(
        "recommendations and remarks {}, {}/{} table cells match, runtime {:.0?}",
        if structural.is_empty() { "ok" } else { "WRONG" },
        cells_checked - cell_mismatches.len(),
        cells_checked,
        elapsed
    );
    for s in &structural {
        detail.push_str(&format!("; {s}"));
    }
    for (p, c, t, g) in &cell_mismatches {
        detail.push_str(&format!("; pond {p} {c}: table {t}, readings {g}"));
    }
    Outcome { pass, detail, tolerated: !pass && structural.is_empty() && found == known }
}

fn criterion_2() -> Outcome {
    let model = UltrasonicModel::<f64>::new(340.0, 5.0).expect("valid model");
    let d: f64 = ultrasonic_distance(0.002, &model).expect("distance");
    let anchor_ok = (d - 0.34).abs() <= EXACT_TOL;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let speed = rng.random_range(300.0..360.0);
        let m = UltrasonicModel::new(speed, 10.0).expect("valid model");
        let a: f64 = rng.random_range(0.0..0.03);
        let b: f64 = rng.random_range(0.0..0.03);
        let k: f64 = rng.random_range(0.0..1.0);
        let f = |t: f64| ultrasonic_distance(t, &m).expect("distance");
        let additivity = (f(a + b) - (f(a) + f(b))).abs();
        let homogeneity = (f(k * a) - k * f(a)).abs();
        let closed_form = (f(a) - speed * a / 2.0).abs();
        worst = worst.max(additivity).max(homogeneity).max(closed_form);
    }
    let linear_ok = worst <= EXACT_TOL;
    Outcome::new(
        anchor_ok && linear_ok,
        format!("distance(0.002 s, 340 m/s) = {d}, worst linearity residual {worst:.1e} over 1000 inputs"),
    )
}

fn naive_check(counts: &[Vec<u64>]) -> Result<(), String> {
    let n = counts.len();
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let cm = ConfusionMatrix::from_counts(names, counts.to_vec()).map_err(|e| e.to_string())?;
    let total: f64 = counts.iter().flatten().map(|&c| c as f64).sum();
    let diag: f64 = (0..n).map(|k| counts[k][k] as f64).sum();
    let safe = |a: f64, b: f64| if b == 0.0 { 0.0 } else { a / b };
    let close = |what: &str, got: f64, want: f64| {
        if (got - want).abs() <= EXACT_TOL {
            Ok(())
        } else {
            Err(format!("{what}: got {got}, oracle {want} on {counts:?}"))
        }
    };

    let acc = diag / total;
    close("accuracy", accuracy::<f64>(&cm).map_err(|e| e.to_string())?, acc)?;
    let mut chance = 0.0;
    let mut sums = [0.0f64; 5];
    for k in 0..n {
        let row: f64 = counts[k].iter().map(|&c| c as f64).sum();
        let col: f64 = counts.iter().map(|r| r[k] as f64).sum();
        let tp = counts[k][k] as f64;
        let fp = col - tp;
        let fn_ = row - tp;
        let tn = total - tp - fp - fn_;
        chance += row * col;
        let p = safe(tp, tp + fp);
        let r = safe(tp, tp + fn_);
        let f = safe(2.0 * p * r, p + r);
        let fpr = safe(fp, fp + tn);
        close("precision", precision::<f64>(&cm, k).map_err(|e| e.to_string())?.value, p)?;
        close("recall", recall::<f64>(&cm, k).map_err(|e| e.to_string())?.value, r)?;
        let rates = tp_fp_rates::<f64>(&cm, k).map_err(|e| e.to_string())?;
        close("tp rate", rates.tp_rate.value, r)?;
        close("fp rate", rates.fp_rate.value, fpr)?;
        let m = class_metrics::<f64>(&cm, k).map_err(|e| e.to_string())?;
        close("f1", m.f1.value, f)?;
        for (s, v) in sums.iter_mut().zip([p, r, f, r, fpr]) {
            *s += row * v;
        }
    }
    let p_e = chance / (total * total);
    let k_oracle = if p_e == 1.0 { 0.0 } else { (acc - p_e) / (1.0 - p_e) };
    close("kappa", kappa::<f64>(&cm).map_err(|e| e.to_string())?, k_oracle)?;

    let report = Report::<f64>::from_matrix("oracle", cm).map_err(|e| e.to_string())?;
    close("weighted precision", report.weighted_precision, sums[0] / total)?;
    close("weighted recall", report.weighted_recall, sums[1] / total)?;
    close("weighted f1", report.weighted_f1, sums[2] / total)?;
    close("weighted tp rate", report.weighted_tp_rate, sums[3] / total)?;
    close("weighted fp rate", report.weighted_fp_rate, sums[4] / total)?;
    close("micro identity", report.weighted_recall, report.accuracy)?;
    Ok(())
}

fn criterion_3() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    let mut failure = None;
    while checked < 1000 {
        let n = rng.random_range(1..=6);
        let counts: Vec<Vec<u64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..=50)).collect()).collect();
        if counts.iter().flatten().sum::<u64>() == 0 {
            continue;
        }
        checked += 1;
        if let Err(e) = naive_check(&counts) {
            failure = Some(e);
            break;
        }
    }
    let elapsed = started.elapsed();
    let pass = failure.is_none() && elapsed < ORACLE_BUDGET;
    let detail = match failure {
        Some(e) => e,
        None => format!("{checked} matrices agree with the recount oracle, runtime {elapsed:.0?}"),
    };
    Outcome::new(pass, detail)
}

fn criterion_4() -> Outcome {
    let names = || vec!["a".to_string(), "b".to_string()];
    let diag = ConfusionMatrix::from_counts(names(), vec![vec![12, 0], vec![0, 8]]).expect("matrix");
    let flat = ConfusionMatrix::from_counts(names(), vec![vec![25, 25], vec![25, 25]]).expect("matrix");
    let k_diag = kappa::<f64>(&diag).expect("kappa");
    let k_flat = kappa::<f64>(&flat).expect("kappa");
    Outcome::new(
        (k_diag - 1.0).abs() <= EXACT_TOL && k_flat.abs() <= EXACT_TOL,
        format!("diagonal kappa {k_diag}, uniform kappa {k_flat}"),
    )
}

fn cv_accuracy(spec: &AlgorithmSpec, data: &Dataset, seed: u64) -> Report<f64> {
    let cm = cross_validate(spec, data, 10, seed).expect("cross-validation");
    Report::from_matrix(spec.tag(), cm).expect("report")
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let data = generate_labeled_dataset(660, 1, &SpeciesConfig::default_species()).expect("dataset");
    let mut parts = Vec::new();
    let mut pass = data.n_classes() == 11;
    for spec in AlgorithmSpec::all_defaults() {
        let spec = spec.with_seed(1);
        let acc = cv_accuracy(&spec, &data, 1).accuracy;
        pass &= acc >= FLOOR_ACCURACY;
        parts.push(format!("{} {:.2}%", spec.tag(), 100.0 * acc));
    }
    let elapsed = started.elapsed();
    pass &= elapsed < FLOOR_BUDGET;
    Outcome::new(pass, format!("{} classes; {}; runtime {elapsed:.1?}", data.n_classes(), parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let config = SpeciesConfig::default_species().with_noise(RANKING_NOISE);
    let mut rf_ge_j48 = 0;
    let mut rf_first = 0;
    for seed in 1..=10u64 {
        let data = generate_labeled_dataset(600, seed, &config).expect("dataset");
        let reports: Vec<Report<f64>> = ["random_forest", "j48", "knn"]
            .iter()
            .map(|tag| {
                let spec: AlgorithmSpec = tag.parse().expect("known tag");
                cv_accuracy(&spec.with_seed(seed), &data, seed)
            })
            .collect();
        if reports[0].accuracy >= reports[1].accuracy {
            rf_ge_j48 += 1;
        }
        if rank_models(&reports)[0].algorithm == "random_forest" {
            rf_first += 1;
        }
    }
    let elapsed = started.elapsed();
    Outcome::new(
        rf_ge_j48 >= RF_GE_J48_MIN && rf_first >= RF_FIRST_MIN && elapsed < RANKING_BUDGET,
        format!("rf >= j48 in {rf_ge_j48}/10 seeds, rf ranked first in {rf_first}/10, runtime {elapsed:.1?}"),
    )
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map(|rd| rd.filter_map(|e| e.ok()).map(|e| e.path()).collect())
        .unwrap_or_default();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).expect("read output")))
        .collect()
}

fn one_pass(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let d = dir.to_str().expect("utf-8 path");
    let mut outputs = Vec::new();
    let commands: Vec<Vec<String>> = vec![
        vec!["--seed", "9", "simulate", "--pond", "3"],
        vec!["--seed", "9", "--format", "json", "simulate", "--pond", "5"],
        vec!["--format", "json", "verdict", "--fixtures"],
        vec!["--format", "csv", "verdict", "--fixtures"],
        vec!["--seed", "4", "--format", "json", "evaluate", "--synthetic", "220", "--noise", "0.2", "--folds", "5"],
        vec!["--seed", "4", "export-report", "--synthetic", "50", "--noise", "0.1"],
        vec!["--seed", "4", "export-report", "--fixtures"],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(String::from).collect())
    .collect();
    for (i, args) in commands.iter().enumerate() {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        outputs.push((format!("stdout {i}"), stdout_of(&args)?.into_bytes()));
    }
    let reports = format!("{d}/reports");
    let models = format!("{d}/models");
    stdout_of(&[
        "--seed", "4", "evaluate", "--synthetic", "220", "--noise", "0.2", "--folds", "5", "--report-dir", &reports,
        "--model-dir", &models,
    ])?;
    outputs.extend(read_tree(Path::new(&reports)));
    outputs.extend(read_tree(Path::new(&models)));
    Ok(outputs)
}

fn criterion_7() -> Outcome {
    let a = tempfile::tempdir().expect("tempdir");
    let b = tempfile::tempdir().expect("tempdir");
    let (first, second) = match (one_pass(a.path()), one_pass(b.path())) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return Outcome::new(false, e),
    };
    let mut differing: Vec<String> =
        first.iter().zip(&second).filter(|(x, y)| x != y).map(|(x, _)| x.0.clone()).collect();
    if first.len() != second.len() {
        differing.push("artifact count".to_string());
    }

    let config = SpeciesConfig::default_species().with_noise(0.2);
    let data = generate_labeled_dataset(200, 7, &config).expect("dataset");
    let mut trainers = 0;
    for spec in AlgorithmSpec::all_defaults() {
        let spec = spec.with_seed(7);
        let encode = || ModelFile::new(&data, train(&spec, &data).expect("train")).to_json();
        if encode() != encode() {
            differing.push(format!("model {}", spec.tag()));
        }
        trainers += 1;
    }
    let detail = if differing.is_empty() {
        format!("{} command artifacts and {trainers} trained models byte-identical across two runs", first.len())
    } else {
        format!("differences in {}", differing.join(", "))
    };
    Outcome::new(differing.is_empty() && !first.is_empty(), detail)
}

struct Server {
    child: Child,
    base: String,
    key: Option<String>,
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

fn start_server(data_dir: &Path) -> Result<Server, String> {
    let mut child = Command::new(bin())
        .args(["serve", "--bind", "127.0.0.1:0", "--data-dir"])
        .arg(data_dir)
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| e.to_string())?;
    let mut lines = BufReader::new(child.stderr.take().expect("piped stderr")).lines();
    let mut key = None;
    let base = loop {
        let Some(Ok(line)) = lines.next() else {
            let _ = child.kill();
            return Err("server exited before listening".to_string());
        };
        if let Some(rest) = line.strip_prefix("pondwatch: created channel ") {
            key = rest.split(" with write key ").nth(1).map(str::to_string);
        }
        if let Some(rest) = line.strip_prefix("pondwatch: listening on ") {
            break rest.split_whitespace().next().unwrap_or_default().to_string();
        }
    };
    std::thread::spawn(move || for _ in lines {});
    Ok(Server { child, base, key })
}

fn get(url: &str) -> Result<String, String> {
    ureq::get(url)
        .call()
        .map_err(|e| format!("GET {url}: {e}"))?
        .into_body()
        .read_to_string()
        .map_err(|e| e.to_string())
}

fn value_set(entries: &[FeedEntry]) -> BTreeSet<(u64, i64, Vec<Option<u64>>)> {
    entries
        .iter()
        .map(|e| {
            let fields = e.fields.iter().map(|f| f.map(f64::to_bits)).collect();
            (e.entry_id, e.created_at.timestamp(), fields)
        })
        .collect()
}

fn service_round_trip() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let server = start_server(dir.path())?;
    let key = server.key.clone().ok_or("server did not report a write key")?;
    let base = server.base.clone();

    let handles: Vec<_> = (0..100)
        .map(|i| {
            let url = format!("{base}/update");
            let key = key.clone();
            std::thread::spawn(move || -> Result<u64, String> {
                let turbidity = format!("{:.2}", 3.0 + i as f64 / 100.0);
                let temperature = format!("{:.2}", 20.0 + i as f64 / 8.0);
                let body = ureq::post(&url)
                    .send_form([("api_key", key.as_str()), ("field1", &turbidity), ("field2", &temperature)])
                    .map_err(|e| e.to_string())?
                    .into_body()
                    .read_to_string()
                    .map_err(|e| e.to_string())?;
                body.trim().parse::<u64>().map_err(|e| format!("entry id {body:?}: {e}"))
            })
        })
        .collect();
    let mut ids = Vec::new();
    for h in handles {
        ids.push(h.join().map_err(|_| "writer panicked")??);
    }
    ids.sort_unstable();
    if ids != (1..=100).collect::<Vec<u64>>() {
        return Err(format!("entry ids are not exactly 1..100: {ids:?}"));
    }

    let feeds = format!("{base}/channels/1/feeds");
    let csv = parse_feed_csv(get(&format!("{feeds}.csv?results=8000"))?.as_bytes()).map_err(|e| e.to_string())?;
    let json = parse_feed_json(&get(&format!("{feeds}.json?results=8000"))?).map_err(|e| e.to_string())?;
    let xml = parse_feed_xml(&get(&format!("{feeds}.xml?results=8000"))?).map_err(|e| e.to_string())?;
    let reference = value_set(&csv);
    if reference.len() != 100 || value_set(&json) != reference || value_set(&xml) != reference {
        return Err(format!(
            "exports disagree: csv {} json {} xml {} entries",
            csv.len(),
            json.len(),
            xml.len()
        ));
    }

    drop(server);
    let restarted = start_server(dir.path())?;
    let after = parse_feed_csv(get(&format!("{}/channels/1/feeds.csv?results=8000", restarted.base))?.as_bytes())
        .map_err(|e| e.to_string())?;
    if value_set(&after) != reference {
        return Err(format!("after restart {} entries, expected the same 100", after.len()));
    }
    Ok("ids 1..100, csv/json/xml value sets identical, 100 entries after restart".to_string())
}

fn criterion_8() -> Outcome {
    let started = Instant::now();
    let result = service_round_trip();
    let elapsed = started.elapsed();
    match result {
        Ok(d) => Outcome::new(elapsed < SERVICE_BUDGET, format!("{d}, runtime {elapsed:.1?}")),
        Err(e) => Outcome::new(false, e),
    }
}

fn criterion_9() -> Outcome {
    let start: DateTime<Utc> = Utc.with_ymd_and_hms(2020, 12, 20, 20, 50, 0).unwrap();
    let entries: Vec<FeedEntry> = (0..=10)
        .map(|i| FeedEntry {
            entry_id: i + 1,
            created_at: start + chrono::Duration::seconds(60 * i as i64),
            fields: vec![Some(i as f64)],
        })
        .collect();
    let once = stabilization_filter_from(&entries, start, 180);
    let twice = stabilization_filter_from(&once, start, 180);
    let offsets: Vec<i64> = once.iter().map(|e| (e.created_at - start).num_seconds()).collect();
    let expected: Vec<i64> = (3..=10).map(|i| 60 * i).collect();
    Outcome::new(
        offsets == expected && twice == once,
        format!("survivors at {offsets:?} s, second pass {}", if twice == once { "unchanged" } else { "CHANGED" }),
    )
}

fn oracle_zone(ph: f64) -> Vec<PhZone> {
    let mut zones = Vec::new();
    if ph < 4.0 || ph > 11.0 {
        zones.push(PhZone::Death);
    }
    if (4.0..=5.0).contains(&ph) {
        zones.push(PhZone::NoReproduction);
    }
    if (ph > 5.0 && ph < 6.5) || (ph > 8.5 && ph <= 10.0) {
        zones.push(PhZone::SlowGrowth);
    }
    if ph > 10.0 && ph <= 11.0 {
        zones.push(PhZone::Critical);
    }
    if (6.5..=8.5).contains(&ph) {
        zones.push(PhZone::Ideal);
    }
    zones
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut problems = Vec::new();
    for _ in 0..10_000 {
        let ph: f64 = rng.random_range(0.0..=14.0);
        let oracle = oracle_zone(ph);
        let got = classify_ph(ph).ok();
        if oracle.len() != 1 || got != Some(oracle[0]) {
            problems.push(format!("pH {ph}: oracle {oracle:?}, got {got:?}"));
        }
    }
    let boundaries = [
        (4.0, PhZone::NoReproduction),
        (5.0, PhZone::NoReproduction),
        (6.5, PhZone::Ideal),
        (8.5, PhZone::Ideal),
        (10.0, PhZone::SlowGrowth),
        (11.0, PhZone::Critical),
    ];
    for (ph, want) in boundaries {
        let got = classify_ph(ph).ok();
        if got != Some(want) {
            problems.push(format!("pH {ph}: expected {want:?}, got {got:?}"));
        }
    }
    let oxygen = classify_do(6.79).ok();
    if oxygen != Some(OxygenStatus::Healthy) {
        problems.push(format!("DO 6.79 classified {oxygen:?}"));
    }
    let detail = if problems.is_empty() {
        "10000 samples in exactly one zone, 6 boundaries correct, DO 6.79 mg/L Healthy".to_string()
    } else {
        problems.into_iter().take(5).collect::<Vec<_>>().join("; ")
    };
    Outcome::new(detail.starts_with("10000"), detail)
}

fn criterion_11() -> Outcome {
    let config = SpeciesConfig::default_species().with_noise(0.3);
    let data = generate_labeled_dataset(330, 11, &config).expect("dataset");
    let forest = train_random_forest(
        &data,
        ForestParams { n_trees: 1, features_per_split: Some(data.n_features()), bootstrap: false, min_leaf: 2, seed: 11 },
    )
    .expect("forest");
    let tree = train_j48(&data, J48Params { min_leaf: 2, confidence: 0.25, pruned: false }).expect("tree");

    let mut lo = vec![f64::INFINITY; data.n_features()];
    let mut hi = vec![f64::NEG_INFINITY; data.n_features()];
    for inst in data.instances() {
        for (f, &v) in inst.features.iter().enumerate() {
            lo[f] = lo[f].min(v);
            hi[f] = hi[f].max(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut disagreements = 0;
    for _ in 0..1000 {
        let x: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&a, &b)| {
                let pad = 0.1 * (b - a);
                rng.random_range(a - pad..=b + pad)
            })
            .collect();
        if forest.predict(&x) != tree.predict(&x) {
            disagreements += 1;
        }
    }
    Outcome::new(disagreements == 0, format!("{disagreements} disagreements on 1000 probes"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("verdict regression against the reference pond summary", criterion_1),
        ("ultrasonic distance anchor and linearity", criterion_2),
        ("metric recount oracle", criterion_3),
        ("kappa anchors", criterion_4),
        ("classifier accuracy floor", criterion_5),
        ("random forest ranking under noise", criterion_6),
        ("determinism of commands and trainers", criterion_7),
        ("telemetry service round trip", criterion_8),
        ("stabilization filter", criterion_9),
        ("pH zone partition and DO anchor", criterion_10),
        ("degenerate forest equals unpruned J48", criterion_11),
    ];
    let mut hard_failures = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let outcome = check();
        let status = match (outcome.pass, outcome.tolerated) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        if !outcome.pass && !outcome.tolerated {
            hard_failures += 1;
        }
        println!("criterion {:>2} {status}: {title}: {}", i + 1, outcome.detail);
    }
    if hard_failures > 0 {
        println!("{hard_failures} criteria failed");
        std::process::exit(1);
    }
}
