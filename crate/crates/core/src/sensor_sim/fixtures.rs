//! Field recordings from the five ponds: 20 stable-circuit samples per
//! pond for each of pH, temperature, conductivity and turbidity.
//! Rows are sample order, columns are ponds 1..=5.

use super::Parameter;
use crate::error::{Error, Result};

pub const FIXTURE_ROWS: usize = 20;
pub const FIXTURE_PONDS: u8 = 5;
pub const FIXTURE_PARAMETERS: [Parameter; 4] =
    [Parameter::Ph, Parameter::Temperature, Parameter::Conductivity, Parameter::Turbidity];

type Table = [[f64; FIXTURE_PONDS as usize]; FIXTURE_ROWS];

const PH: Table = [
    [7.67, 8.65, 6.02, 8.3, 3.84],
    [8.39, 8.66, 6.01, 8.15, 3.9],
    [8.24, 8.74, 6.0, 8.09, 3.91],
    [8.26, 8.57, 6.09, 7.99, 3.89],
    [8.23, 8.62, 6.93, 7.92, 3.88],
    [8.31, 8.69, 6.42, 7.96, 3.92],
    [8.38, 8.73, 6.48, 7.87, 3.91],
    [7.84, 8.63, 7.0, 7.7, 3.89],
    [6.7, 8.66, 7.27, 7.54, 3.9],
    [6.02, 8.75, 7.24, 7.5, 3.93],
    [8.16, 8.77, 7.11, 7.43, 3.92],
    [8.23, 8.78, 7.6, 7.42, 3.86],
    [7.96, 8.81, 7.83, 7.26, 3.87],
    [7.79, 8.79, 7.75, 6.95, 3.86],
    [7.88, 8.87, 7.5, 6.78, 3.9],
    [7.84, 8.8, 7.07, 6.92, 3.89],
    [8.18, 8.78, 6.99, 6.87, 3.86],
    [8.16, 8.8, 6.87, 6.51, 3.85],
    [8.32, 8.79, 6.68, 7.02, 3.92],
    [8.23, 8.79, 6.95, 6.8, 3.95],
];

const TEMPERATURE: Table = [
    [17.62, 17.75, 21.0, 21.44, 21.06],
    [17.5, 17.87, 21.0, 21.5, 21.09],
    [17.56, 17.94, 21.0, 21.37, 21.12],
    [17.75, 17.87, 21.06, 21.44, 21.06],
    [17.56, 17.81, 21.0, 21.5, 21.12],
    [17.69, 17.94, 20.94, 21.37, 21.19],
    [17.69, 17.81, 21.0, 21.25, 21.19],
    [17.56, 17.94, 21.0, 21.31, 21.12],
    [17.5, 17.94, 21.06, 21.12, 21.19],
    [17.62, 18.0, 21.0, 21.25, 21.06],
    [17.62, 17.94, 21.06, 21.19, 21.25],
    [17.56, 18.0, 20.94, 21.12, 21.12],
    [17.62, 17.94, 20.87, 21.25, 21.06],
    [17.75, 18.0, 21.06, 21.19, 21.25],
    [17.75, 18.0, 20.87, 21.25, 21.06],
    [17.69, 17.81, 20.87, 21.06, 21.12],
    [17.69, 17.87, 21.06, 21.19, 21.19],
    [17.75, 18.0, 21.06, 21.19, 21.0],
    [17.56, 17.94, 21.0, 21.25, 21.19],
    [17.56, 17.94, 21.06, 21.25, 21.12],
];

const CONDUCTIVITY: Table = [
    [995.88, 1003.23, 1186.92, 1211.79, 1190.31],
    [989.1, 1010.01, 1186.92, 1215.18, 1192.01],
    [992.49, 1013.97, 1186.92, 1207.83, 1193.7],
    [1003.23, 1010.01, 1190.32, 1211.79, 1190.31],
    [992.49, 1006.62, 1186.92, 1215.18, 1193.7],
    [999.83, 1013.97, 1183.53, 1207.83, 1197.66],
    [999.83, 1006.62, 1186.92, 1201.05, 1197.66],
    [992.49, 1013.97, 1186.92, 1204.44, 1193.7],
    [989.1, 1013.97, 1190.32, 1193.7, 1197.66],
    [995.88, 1017.36, 1186.92, 1201.05, 1190.31],
    [995.62, 1013.97, 1190.32, 1197.66, 1201.05],
    [992.49, 1017.36, 1183.53, 1193.7, 1193.7],
    [995.88, 1013.97, 1179.57, 1201.05, 1190.31],
    [1003.23, 1017.36, 1190.32, 1197.66, 1201.05],
    [1003.23, 1017.36, 1179.57, 1201.05, 1190.31],
    [999.83, 1006.62, 1189.57, 1190.31, 1193.7],
    [999.83, 1010.01, 1190.32, 1197.66, 1197.66],
    [1003.23, 1017.36, 1190.32, 1197.66, 1186.92],
    [992.49, 1013.97, 1186.92, 1201.05, 1197.66],
    [992.49, 1013.97, 1190.32, 1201.05, 1193.7],
];

const TURBIDITY: Table = [
    [3.56, 3.44, 3.48, 3.62, 3.56],
    [3.56, 3.45, 3.49, 3.62, 3.56],
    [3.55, 3.41, 3.48, 3.62, 3.56],
    [3.55, 3.46, 3.48, 3.61, 3.56],
    [3.55, 3.47, 3.47, 3.61, 3.57],
    [3.56, 3.48, 3.47, 3.61, 3.57],
    [3.56, 3.45, 3.46, 3.61, 3.57],
    [3.57, 3.46, 3.46, 3.6, 3.57],
    [3.56, 3.44, 3.45, 3.6, 3.57],
    [3.57, 3.47, 3.44, 3.6, 3.56],
    [3.55, 3.47, 3.45, 3.61, 3.56],
    [3.55, 3.48, 3.45, 3.61, 3.56],
    [3.56, 3.43, 3.43, 3.62, 3.56],
    [3.56, 3.46, 3.41, 3.62, 3.57],
    [3.55, 3.46, 3.37, 3.62, 3.57],
    [3.55, 3.48, 3.36, 3.6, 3.57],
    [3.56, 3.48, 3.35, 3.6, 3.56],
    [3.56, 3.49, 3.33, 3.61, 3.56],
    [3.56, 3.5, 3.32, 3.61, 3.58],
    [3.56, 3.5, 3.31, 3.61, 3.58],
];
/// Returns the 20 recorded values for one pond and parameter, in recording order.
pub fn load_fixture(pond_id: u8, parameter: Parameter) -> Result<Vec<f64>> {
    if !(1..=FIXTURE_PONDS).contains(&pond_id) {
        return Err(Error::NotFound(format!("no fixture for pond {pond_id}")));
    }
    let table = match parameter {
        Parameter::Ph => &PH,
        Parameter::Temperature => &TEMPERATURE,
        Parameter::Conductivity => &CONDUCTIVITY,
        Parameter::Turbidity => &TURBIDITY,
        other => return Err(Error::NotFound(format!("no fixture table for {other}"))),
    };
    let col = usize::from(pond_id - 1);
    Ok(table.iter().map(|row| row[col]).collect())
}

/// All fixture tables as CSV with columns `pond_id,parameter,sample_index,value`.
pub fn fixture_csv() -> String {
    let mut out = String::from("pond_id,parameter,sample_index,value\n");
    for pond in 1..=FIXTURE_PONDS {
        for parameter in FIXTURE_PARAMETERS {
            let values = load_fixture(pond, parameter).expect("embedded fixture");
            for (i, v) in values.iter().enumerate() {
                out.push_str(&format!("{pond},{parameter},{i},{v:.2}\n"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minmax(v: &[f64]) -> (f64, f64) {
        v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
    }

    #[test]
    fn published_anchor_values() {
        assert_eq!(load_fixture(1, Parameter::Ph).unwrap()[0], 7.67);
        let turb4 = load_fixture(4, Parameter::Turbidity).unwrap();
        assert!(turb4.iter().all(|v| (3.60..=3.62).contains(v)));
        assert_eq!(*load_fixture(2, Parameter::Conductivity).unwrap().last().unwrap(), 1013.97);
    }

    #[test]
    fn every_table_is_complete() {
        for pond in 1..=FIXTURE_PONDS {
            for p in FIXTURE_PARAMETERS {
                let v = load_fixture(pond, p).unwrap();
                assert_eq!(v.len(), FIXTURE_ROWS);
                assert!(v.iter().all(|x| x.is_finite()));
            }
        }
    }

    #[test]
    fn ph_envelopes_match_reported_ranges() {
        let expected = [(6.02, 8.39), (8.57, 8.87), (6.00, 7.83), (6.51, 8.30), (3.84, 3.95)];
        for (i, (lo, hi)) in expected.iter().enumerate() {
            let (mn, mx) = minmax(&load_fixture(i as u8 + 1, Parameter::Ph).unwrap());
            assert_eq!((mn, mx), (*lo, *hi), "pond {}", i + 1);
        }
    }

    #[test]
    fn unknown_lookups_fail() {
        assert!(matches!(load_fixture(0, Parameter::Ph), Err(Error::NotFound(_))));
        assert!(matches!(load_fixture(6, Parameter::Ph), Err(Error::NotFound(_))));
        assert!(matches!(load_fixture(1, Parameter::Depth), Err(Error::NotFound(_))));
    }

    #[test]
    fn csv_export_shape() {
        let csv = fixture_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], "pond_id,parameter,sample_index,value");
        assert_eq!(lines.len(), 1 + 5 * 4 * 20);
        assert_eq!(lines[1], "1,pH,0,7.67");
    }
}
