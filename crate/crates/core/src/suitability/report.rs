use serde::Serialize;

use super::PondVerdict;
use crate::sensor_sim::Parameter;
use crate::Real;

const COLUMNS: [(Parameter, &str); 5] = [
    (Parameter::Ph, "pH"),
    (Parameter::Temperature, "Temperature (°C)"),
    (Parameter::Turbidity, "Turbidity (ntu)"),
    (Parameter::Depth, "Depth (m)"),
    (Parameter::Conductivity, "Conductivity (µS/cm)"),
];

fn trim_number(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cell<T: Real>(verdict: &PondVerdict<T>, parameter: Parameter) -> String {
    match verdict.status(parameter) {
        None => "-".to_string(),
        Some(s) => {
            let [lo, hi] = s.observed_range;
            if parameter == Parameter::Depth {
                format!("{}-{}", trim_number(format!("{lo:.2}")), trim_number(format!("{hi:.2}")))
            } else {
                format!("{lo:.2}-{hi:.2}")
            }
        }
    }
}

/// Fixed-width table with one row per pond: observed ranges per parameter and the remark.
pub fn verdict_table<T: Real>(verdicts: &[PondVerdict<T>]) -> String {
    let mut header = vec!["Pond".to_string()];
    header.extend(COLUMNS.iter().map(|(_, h)| h.to_string()));
    header.push("Remarks".to_string());

    let rows: Vec<Vec<String>> = verdicts
        .iter()
        .map(|v| {
            let mut row = vec![format!("Pond {}", v.pond_id)];
            row.extend(COLUMNS.iter().map(|&(p, _)| cell(v, p)));
            row.push(v.remarks.clone());
            row
        })
        .collect();

    let ncols = header.len();
    let widths: Vec<usize> = (0..ncols)
        .map(|c| {
            std::iter::once(&header)
                .chain(rows.iter())
                .map(|r| r[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();

    let render = |r: &[String]| {
        let mut line = String::new();
        for (c, text) in r.iter().enumerate() {
            if c + 1 == ncols {
                line.push_str(text);
            } else {
                line.push_str(text);
                line.push_str(&" ".repeat(widths[c] - text.chars().count() + 2));
            }
        }
        line.push('\n');
        line
    };

    let mut out = render(&header);
    for r in &rows {
        out.push_str(&render(r));
    }
    out
}

#[derive(Serialize)]
struct VerdictDocument<'a, T> {
    schema_version: u32,
    ponds: &'a [PondVerdict<T>],
}

pub fn verdict_json<T: Real + Serialize>(verdicts: &[PondVerdict<T>]) -> String {
    serde_json::to_string_pretty(&VerdictDocument { schema_version: 1, ponds: verdicts })
        .expect("verdicts serialize")
}
