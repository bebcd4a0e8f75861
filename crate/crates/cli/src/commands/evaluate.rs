use std::fs::File;
use std::path::{Path, PathBuf};

use pondwatch_core::metrics::{rank_models, rank_table};
use pondwatch_core::ml::{
    cross_validate, generate_labeled_dataset, train, AlgorithmSpec, Dataset, ModelFile, SpeciesConfig,
};
use pondwatch_core::{RankedModel, Report};
use serde_json::json;

use crate::cli::EvaluateArgs;
use crate::config::FileConfig;
use crate::error::{io_context, usage, CliError, Result};
use crate::output::{write_file, Context, OutputFormat};

pub const DEFAULT_FOLDS: usize = 10;

/// Parses `all` or a comma-separated list of tags, keeping first occurrences.
pub fn parse_algorithms(list: &str) -> Result<Vec<AlgorithmSpec>> {
    let mut out: Vec<AlgorithmSpec> = Vec::new();
    for tag in list.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let specs = if tag.eq_ignore_ascii_case("all") {
            AlgorithmSpec::all_defaults()
        } else {
            vec![tag.parse::<AlgorithmSpec>().map_err(|e| usage(e.to_string()))?]
        };
        for s in specs {
            if !out.iter().any(|o| o.tag() == s.tag()) {
                out.push(s);
            }
        }
    }
    if out.is_empty() {
        return Err(usage(format!("no algorithms given; valid tags: {}, all", AlgorithmSpec::TAGS.join(", "))));
    }
    Ok(out)
}

fn load_dataset(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(io_context(format!("opening {}", path.display())))?;
    Ok(Dataset::from_csv(file)?)
}

pub fn ranking_csv(ranked: &[RankedModel]) -> String {
    let mut out = String::from("position,algorithm,accuracy_pct,kappa_pct,avg_tp_rate_pct\n");
    for r in ranked {
        out.push_str(&format!(
            "{},{},{:.2},{:.2},{:.2}\n",
            r.position,
            r.algorithm,
            100.0 * r.accuracy,
            100.0 * r.kappa,
            100.0 * r.weighted_tp_rate
        ));
    }
    out
}

fn to_json(value: &serde_json::Value) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))
}

pub fn run(args: EvaluateArgs, cfg: &FileConfig, ctx: &Context) -> Result<()> {
    let algos: String = cfg.or(args.algo, "algo")?.unwrap_or_else(|| "all".to_string());
    let specs = parse_algorithms(&algos)?;
    let folds = cfg.or(args.folds, "folds")?.unwrap_or(DEFAULT_FOLDS);
    if folds < 2 {
        return Err(usage("--folds must be at least 2"));
    }
    let noise = cfg.or(args.noise, "noise")?.unwrap_or(0.0);

    let dataset = match (args.dataset, args.synthetic) {
        (Some(path), _) => load_dataset(&path)?,
        (None, Some(n)) => generate_labeled_dataset(n, ctx.seed, &SpeciesConfig::default_species().with_noise(noise))?,
        (None, None) => return Err(usage("evaluate needs --dataset or --synthetic")),
    };

    let mut reports = Vec::with_capacity(specs.len());
    for spec in &specs {
        let spec = spec.with_seed(ctx.seed);
        let cm = cross_validate(&spec, &dataset, folds, ctx.seed)?;
        reports.push(Report::from_matrix(spec.tag(), cm)?);
    }
    let ranked = rank_models(&reports);

    let rendered = match ctx.format {
        OutputFormat::Text => {
            let mut s = String::new();
            for r in &reports {
                s.push_str(&r.to_text());
                s.push('\n');
            }
            s.push_str(&rank_table(&ranked));
            s
        }
        OutputFormat::Json => to_json(&json!({ "schema_version": 1, "reports": reports, "ranking": ranked }))? + "\n",
        OutputFormat::Csv => ranking_csv(&ranked),
    };
    ctx.emit(&rendered)?;

    let report_dir: Option<PathBuf> = cfg.or(args.report_dir, "report_dir")?;
    if let Some(dir) = report_dir {
        for r in &reports {
            write_file(&dir.join(format!("report_{}.json", r.algorithm)), &(r.to_json() + "\n"))?;
        }
        write_file(&dir.join("ranking.txt"), &rank_table(&ranked))?;
        write_file(&dir.join("ranking.csv"), &ranking_csv(&ranked))?;
    }
    let model_dir: Option<PathBuf> = cfg.or(args.model_dir, "model_dir")?;
    if let Some(dir) = model_dir {
        for spec in &specs {
            let spec = spec.with_seed(ctx.seed);
            let file = ModelFile::new(&dataset, train(&spec, &dataset)?);
            write_file(&dir.join(format!("model_{}.json", spec.tag())), &(file.to_json()? + "\n"))?;
        }
    }
    Ok(())
}
