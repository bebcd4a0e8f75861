use std::fs;

use pondwatch_core::ml::{generate_labeled_dataset, SpeciesConfig};
use pondwatch_core::sensor_sim::fixture_csv;
use pondwatch_core::Report;

use crate::cli::ExportArgs;
use crate::config::FileConfig;
use crate::error::{io_context, Result};
use crate::output::{Context, OutputFormat};

fn per_class_csv(report: &Report) -> String {
    let mut out = String::from("class,support,tp,fp,fn,tn,precision,recall,f1,tp_rate,fp_rate\n");
    for c in &report.per_class {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            c.class,
            c.support,
            c.counts.tp,
            c.counts.fp,
            c.counts.fn_,
            c.counts.tn,
            c.precision.value,
            c.recall.value,
            c.f1.value,
            c.tp_rate.value,
            c.fp_rate.value
        ));
    }
    out
}

pub fn run(args: ExportArgs, cfg: &FileConfig, ctx: &Context) -> Result<()> {
    if args.fixtures {
        return ctx.emit(&fixture_csv());
    }
    if let Some(path) = &args.report {
        let text = fs::read_to_string(path).map_err(io_context(format!("reading {}", path.display())))?;
        let report = Report::from_json(&text)?;
        let rendered = match ctx.format {
            OutputFormat::Text => report.to_text(),
            OutputFormat::Json => report.to_json() + "\n",
            OutputFormat::Csv => per_class_csv(&report),
        };
        return ctx.emit(&rendered);
    }
    if let Some(n) = args.synthetic {
        let noise = cfg.or(args.noise, "noise")?.unwrap_or(0.0);
        let dataset = generate_labeled_dataset(n, ctx.seed, &SpeciesConfig::default_species().with_noise(noise))?;
        return ctx.emit(&dataset.to_csv());
    }
    Ok(())
}
