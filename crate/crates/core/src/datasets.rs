//! Dataset manifests and measure-result CSV files.
//!
//! A manifest is a CSV with header `id,path,score,category`; `score` and
//! `category` may be empty. Relative image paths resolve against the
//! manifest's directory.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::measures::{Measure, MeasureVector};
use crate::stats::ResultsTable;

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
    pub score: Option<f64>,
    pub category: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub name: String,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

/// Loads and validates a manifest. The dataset name is the file stem.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&name, &text, base, &path.display().to_string())
}

/// Parses manifest text; `base` anchors relative paths, `file` labels errors.
pub fn parse_manifest(name: &str, text: &str, base: &Path, file: &str) -> Result<DatasetManifest> {
    let row_err = |row: usize, msg: String| Error::Row { file: file.to_string(), row, msg };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| row_err(1, e.to_string()))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (id_col, path_col) = match (col("id"), col("path")) {
        (Some(i), Some(p)) => (i, p),
        _ => return Err(row_err(1, "header must contain id and path columns".into())),
    };
    let (score_col, category_col) = (col("score"), col("category"));

    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (i, record) in reader.records().enumerate() {
        // Line numbers: header is line 1.
        let row = i + 2;
        let record = record.map_err(|e| row_err(row, e.to_string()))?;
        let field = |c: Option<usize>| c.and_then(|c| record.get(c)).filter(|s| !s.is_empty());
        let id = field(Some(id_col)).ok_or_else(|| row_err(row, "empty id".into()))?.to_string();
        if !seen.insert(id.clone()) {
            return Err(row_err(row, format!("duplicate id '{id}'")));
        }
        let rel = field(Some(path_col)).ok_or_else(|| row_err(row, "empty path".into()))?;
        let path = base.join(rel);
        if !path.is_file() {
            return Err(row_err(row, format!("image path {} is not readable", path.display())));
        }
        let score = match field(score_col) {
            None => None,
            Some(s) => {
                let v: f64 = s.parse().map_err(|_| row_err(row, format!("score '{s}' is not a number")))?;
                if !v.is_finite() {
                    return Err(row_err(row, format!("score '{s}' is not finite")));
                }
                Some(v)
            }
        };
        let category = field(category_col).map(str::to_string);
        entries.push(ManifestEntry { id, path, score, category });
    }
    Ok(DatasetManifest { name: name.to_string(), entries })
}

/// Column names of a results table for the given measures, in canonical
/// order, followed by `score`.
pub fn result_columns(measures: &[Measure]) -> Vec<String> {
    let mut ms = measures.to_vec();
    ms.sort();
    ms.dedup();
    ms.iter().map(|m| m.name().to_string()).chain(std::iter::once("score".to_string())).collect()
}

/// Assembles a results table from per-image measure vectors.
pub fn results_table<'a>(
    measures: &[Measure],
    rows: impl IntoIterator<Item = (&'a str, &'a MeasureVector, Option<f64>)>,
) -> Result<ResultsTable> {
    let mut ms = measures.to_vec();
    ms.sort();
    ms.dedup();
    let mut table = ResultsTable::new(result_columns(&ms))?;
    for (id, v, score) in rows {
        let values = ms.iter().map(|&m| v.get(m)).chain(std::iter::once(score)).collect();
        table.push_row(id, values)?;
    }
    Ok(table)
}

/// Formats like C's `%.{sig}g`: `sig` significant digits, trailing zeros
/// removed, exponent form for very large or small magnitudes.
pub fn format_significant(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Serialises a results table as CSV: `id` then the table's columns, nine
/// significant digits, empty cells for missing values.
pub fn results_to_csv(table: &ResultsTable) -> String {
    let mut out = String::from("id");
    for c in table.columns() {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for (id, values) in table.rows() {
        out.push_str(&csv_field(id));
        for v in values {
            out.push(',');
            if let Some(v) = v {
                out.push_str(&format_significant(*v, 9));
            }
        }
        out.push('\n');
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn write_results(table: &ResultsTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if table.is_empty() {
        return Err(Error::Parameter("refusing to write an empty results table".into()));
    }
    std::fs::write(path, results_to_csv(table)).map_err(|e| Error::io(path, e))
}

/// Parses a results CSV: the first column is the row id, the rest numeric.
pub fn parse_results(text: &str, file: &str) -> Result<ResultsTable> {
    let row_err = |row: usize, msg: String| Error::Row { file: file.to_string(), row, msg };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| row_err(1, e.to_string()))?.clone();
    if headers.is_empty() {
        return Err(row_err(1, "missing header".into()));
    }
    let mut table = ResultsTable::new(headers.iter().skip(1).map(str::to_string).collect())
        .map_err(|e| row_err(1, e.to_string()))?;
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| row_err(row, e.to_string()))?;
        let id = record.get(0).unwrap_or_default().to_string();
        let values = record
            .iter()
            .skip(1)
            .map(|s| {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse::<f64>().map(Some).map_err(|_| row_err(row, format!("'{s}' is not a number")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        table.push_row(id, values).map_err(|e| row_err(row, e.to_string()))?;
    }
    Ok(table)
}

pub fn read_results(path: impl AsRef<Path>) -> Result<ResultsTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_results(&text, &path.display().to_string())
}
