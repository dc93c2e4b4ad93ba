//! Dense matrix files: CSV (one matrix row per line) and MatrixMarket
//! `array` format, chosen by extension.

use std::fs;
use std::path::Path;

use hoffman_core::Matrix;

use crate::CliError;

pub fn read_matrix(path: &Path) -> Result<Matrix, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    let is_mtx = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("mtx"));
    let parsed = if is_mtx { parse_mtx(&text) } else { parse_csv(&text) };
    parsed.map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn parse_csv(text: &str) -> Result<Matrix, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| format!("record {}: `{f}` is not a number", line + 1))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(format!(
                    "record {} has {} fields, expected {}",
                    line + 1,
                    row.len(),
                    first.len()
                ));
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    Matrix::from_rows_with_cols(&rows, cols).map_err(|e| e.to_string())
}

pub fn parse_mtx(text: &str) -> Result<Matrix, String> {
    let mut lines = text.lines();
    let banner = lines.next().ok_or("empty file")?;
    let words: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if words.first().map(String::as_str) != Some("%%matrixmarket") || words.get(1).map(String::as_str) != Some("matrix") {
        return Err("missing %%MatrixMarket matrix banner".into());
    }
    if words.get(2).map(String::as_str) != Some("array") {
        return Err("only the dense array format is supported".into());
    }
    match words.get(3).map(String::as_str) {
        Some("real" | "integer" | "double") => {}
        other => return Err(format!("unsupported field type {other:?}")),
    }
    if !matches!(words.get(4).map(String::as_str), None | Some("general")) {
        return Err("only general symmetry is supported".into());
    }
    let mut tokens = lines
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%'))
        .flat_map(str::split_whitespace);
    let mut dim = |what: &str| -> Result<usize, String> {
        tokens
            .next()
            .ok_or(format!("missing {what}"))?
            .parse()
            .map_err(|_| format!("bad {what}"))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let values = tokens
        .map(|t| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != rows * cols {
        return Err(format!("expected {} entries, found {}", rows * cols, values.len()));
    }
    // Array entries are stored column by column.
    let mut m = Matrix::zeros(rows, cols);
    for (k, v) in values.into_iter().enumerate() {
        m[(k % rows.max(1), k / rows.max(1))] = v;
    }
    Ok(m)
}
