//! Matrix files: JSON `{"n_modes": N, "V": [[...], ...]}` or CSV with the
//! header line `# quadstab V n_modes=N` followed by 2N rows.

use std::fs;
use std::path::Path;

use quadstab_core::{Matrix, QuadraticModel};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{fmt_float, matrix, to_json};

const CSV_HEADER: &str = "# quadstab V n_modes=";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelFormat {
    Json,
    Csv,
}

impl ModelFormat {
    /// `.csv` files are CSV, everything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => ModelFormat::Csv,
            _ => ModelFormat::Json,
        }
    }
}

pub fn model_to_json(model: &QuadraticModel) -> String {
    to_json(&json!({"n_modes": model.n_modes(), "V": matrix(model.v())}))
}

pub fn model_to_csv(model: &QuadraticModel) -> String {
    let mut out = format!("{CSV_HEADER}{}\n", model.n_modes());
    for row in model.v().to_rows() {
        let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_model(model: &QuadraticModel, format: ModelFormat) -> String {
    match format {
        ModelFormat::Json => model_to_json(model),
        ModelFormat::Csv => model_to_csv(model),
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

fn build(n: usize, rows: Vec<Vec<f64>>) -> Result<QuadraticModel, CliError> {
    let m = 2 * n;
    if n == 0 {
        return Err(bad("n_modes must be at least 1"));
    }
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(bad(format!("V must be {m}x{m} for n_modes={n}")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(bad("V entries must be finite"));
    }
    Ok(QuadraticModel::new(n, Matrix::from_rows(&rows))?)
}

pub fn parse_model_json(text: &str) -> Result<QuadraticModel, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("model JSON: {e}")))?;
    let n = v
        .get("n_modes")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("model JSON needs an integer n_modes"))? as usize;
    let rows = v
        .get("V")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("model JSON needs a V array"))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| bad("V rows must be arrays"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| bad("V entries must be numbers")))
                .collect::<Result<Vec<f64>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    build(n, rows)
}

pub fn parse_model_csv(text: &str) -> Result<QuadraticModel, CliError> {
    let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
    let n: usize = first
        .trim_end()
        .strip_prefix(CSV_HEADER)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| bad(format!("model CSV must start with '{CSV_HEADER}N'")))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(rest.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| bad(format!("model CSV: {e}")))?;
        let row = record
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| bad(format!("model CSV: bad number '{s}'"))))
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    build(n, rows)
}

/// Read a model, choosing the format by extension, or by content when the
/// file starts with the CSV header.
pub fn read_model(path: &Path) -> Result<QuadraticModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    if text.starts_with(CSV_HEADER) || ModelFormat::from_path(path) == ModelFormat::Csv {
        parse_model_csv(&text)
    } else {
        parse_model_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> QuadraticModel {
        QuadraticModel::new(
            2,
            Matrix::from_rows(&[
                [1.5, 0.4, 0.0, 0.0],
                [0.4, 1.0, 0.1, 0.0],
                [0.0, 0.1, 1.5, 0.0],
                [0.0, 0.0, 0.0, 1.0 / 3.0],
            ]),
        )
        .unwrap()
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let text = model_to_json(&sample());
        assert!(text.starts_with("{\"n_modes\":2,\"V\":[[1.5,0.4,0,0]"));
        let again = model_to_json(&parse_model_json(&text).unwrap());
        assert_eq!(text, again);
    }

    #[test]
    fn csv_round_trip_is_byte_identical() {
        let text = model_to_csv(&sample());
        assert!(text.starts_with("# quadstab V n_modes=2\n1.5,0.4,0,0\n"));
        assert_eq!(text, model_to_csv(&parse_model_csv(&text).unwrap()));
    }

    #[test]
    fn rejects_malformed_models() {
        assert!(parse_model_json("{\"n_modes\":1,\"V\":[[1,2],[0,1]]}").is_err());
        assert!(parse_model_json("{\"n_modes\":1,\"V\":[[1,0,0]]}").is_err());
        assert!(parse_model_json("[1,2]").is_err());
        assert!(parse_model_csv("1,0\n0,1\n").is_err());
        assert!(parse_model_csv("# quadstab V n_modes=1\n1,x\n0,1\n").is_err());
    }
}
