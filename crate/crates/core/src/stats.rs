//! Pearson and Spearman correlation with two-sided p-values, and lower
//! triangular correlation matrices over a [`ResultsTable`].

use std::collections::HashSet;
use std::fmt::Write as _;

use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Named numeric columns keyed by row id; cells may be missing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    columns: Vec<String>,
    rows: Vec<(String, Vec<Option<f64>>)>,
}

impl ResultsTable {
    pub fn new(columns: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::Parameter(format!("duplicate column '{c}'")));
            }
        }
        Ok(Self { columns, rows: Vec::new() })
    }

    pub fn push_row(&mut self, id: impl Into<String>, values: Vec<Option<f64>>) -> Result<()> {
        let id = id.into();
        if values.len() != self.columns.len() {
            return Err(Error::Parameter(format!(
                "row '{id}' has {} values for {} columns",
                values.len(),
                self.columns.len()
            )));
        }
        if self.rows.iter().any(|(existing, _)| *existing == id) {
            return Err(Error::Parameter(format!("duplicate row id '{id}'")));
        }
        self.rows.push((id, values));
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[(String, Vec<Option<f64>>)] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|(_, v)| v[i]).collect())
    }

    /// Keeps the rows for which `keep(id, values)` holds.
    pub fn retain_rows(&mut self, mut keep: impl FnMut(&str, &[Option<f64>]) -> bool) {
        self.rows.retain(|(id, v)| keep(id, v));
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    /// Two-sided p-value under the null of zero correlation.
    pub p: f64,
    /// Number of pairs used.
    pub n: usize,
}

/// Two-sided p-value of a sample correlation `r` over `n` pairs, from the
/// Student-t distribution with `n - 2` degrees of freedom. With
/// `t = r sqrt(df / (1 - r^2))` the tail mass is `I_{df/(df+t^2)}(df/2, 1/2)`
/// and `df / (df + t^2) = 1 - r^2`.
pub fn correlation_p_value(r: f64, n: usize) -> f64 {
    let df = (n - 2) as f64;
    let x = (1.0 - r * r).clamp(0.0, 1.0);
    if x == 0.0 {
        return 0.0;
    }
    beta_reg(df / 2.0, 0.5, x)
}

fn paired(xs: &[Option<f64>], ys: &[Option<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    if xs.len() != ys.len() {
        return Err(Error::Parameter(format!("series lengths differ: {} vs {}", xs.len(), ys.len())));
    }
    Ok(xs
        .iter()
        .zip(ys)
        .filter_map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Some((*x, *y)),
            _ => None,
        })
        .unzip())
}

fn product_moment(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    let n = xs.len();
    if n < 3 {
        return Err(Error::Parameter(format!("correlation needs n >= 3, got {n}")));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Domain("constant series has no correlation".into()));
    }
    let mut r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    // Exact linear relations land a few ulps short of 1.
    if 1.0 - r.abs() < 1e-14 {
        r = r.signum();
    }
    Ok(Correlation { r, p: correlation_p_value(r, n), n })
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    if xs.len() != ys.len() {
        return Err(Error::Parameter(format!("series lengths differ: {} vs {}", xs.len(), ys.len())));
    }
    product_moment(xs, ys)
}

/// Pearson correlation after dropping pairs where either side is missing or
/// non-finite.
pub fn pearson_pairwise(xs: &[Option<f64>], ys: &[Option<f64>]) -> Result<Correlation> {
    let (x, y) = paired(xs, ys)?;
    product_moment(&x, &y)
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(xs: &[f64], ys: &[f64]) -> Result<Correlation> {
    if xs.len() != ys.len() {
        return Err(Error::Parameter(format!("series lengths differ: {} vs {}", xs.len(), ys.len())));
    }
    product_moment(&average_ranks(xs), &average_ranks(ys))
}

pub fn spearman_pairwise(xs: &[Option<f64>], ys: &[Option<f64>]) -> Result<Correlation> {
    let (x, y) = paired(xs, ys)?;
    spearman(&x, &y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Pearson,
    Spearman,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MissingPolicy {
    /// Each pair of columns uses every row where both are present.
    #[default]
    Pairwise,
    /// Rows with any missing cell among the selected columns are dropped.
    CompleteRows,
}

/// A cell of the matrix; failures keep the reason.
pub type Cell = std::result::Result<Correlation, String>;

#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    pub columns: Vec<String>,
    /// `cells[i][j]` for `j < i`.
    pub cells: Vec<Vec<Cell>>,
    /// Designated score column, if any.
    pub score: Option<String>,
    /// Column with the largest |r| against the score column.
    pub best: Option<(String, Correlation)>,
}

impl CorrelationMatrix {
    /// Symmetric lookup; the diagonal is `r = 1`.
    pub fn get(&self, a: &str, b: &str) -> Option<Cell> {
        let i = self.columns.iter().position(|c| c == a)?;
        let j = self.columns.iter().position(|c| c == b)?;
        if i == j {
            return Some(Ok(Correlation { r: 1.0, p: 0.0, n: 0 }));
        }
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        Some(self.cells[hi][lo].clone())
    }

    fn is_best(&self, row: &str, col: &str) -> bool {
        match (&self.score, &self.best) {
            (Some(s), Some((b, _))) => (row == s && col == b) || (col == s && row == b),
            _ => false,
        }
    }

    /// Markdown table in lower-triangular layout; the best measure against
    /// the score column is bold.
    pub fn to_markdown(&self) -> String {
        let mut out = String::from("|   |");
        for c in &self.columns {
            let _ = write!(out, " {c} |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(self.columns.len()));
        out.push('\n');
        for (i, row) in self.columns.iter().enumerate() {
            let _ = write!(out, "| {row} |");
            for (j, col) in self.columns.iter().enumerate() {
                let text = match j.cmp(&i) {
                    std::cmp::Ordering::Less => match &self.cells[i][j] {
                        Ok(c) if self.is_best(row, col) => format!("**{:.3}**", c.r),
                        Ok(c) => format!("{:.3}", c.r),
                        Err(_) => "n/a".into(),
                    },
                    std::cmp::Ordering::Equal => "1".into(),
                    std::cmp::Ordering::Greater => String::new(),
                };
                let _ = write!(out, " {text} |");
            }
            out.push('\n');
        }
        out
    }

    /// Aligned plain-text table; the best measure is marked with `*`.
    pub fn to_text(&self) -> String {
        let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(1).max(8);
        let mut out = format!("{:width$}", "");
        for c in &self.columns {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
        for (i, row) in self.columns.iter().enumerate() {
            let _ = write!(out, "{row:width$}");
            for (j, col) in self.columns.iter().enumerate().take(i + 1) {
                let text = if i == j {
                    "1".to_string()
                } else {
                    match &self.cells[i][j] {
                        Ok(c) if self.is_best(row, col) => format!("*{:.3}", c.r),
                        Ok(c) => format!("{:.3}", c.r),
                        Err(_) => "n/a".into(),
                    }
                };
                let _ = write!(out, " {text:>width$}");
            }
            out.push('\n');
        }
        if let (Some(score), Some((best, c))) = (&self.score, &self.best) {
            let _ = writeln!(out, "best against {score}: {best} (r = {:.3}, p = {:.3e}, n = {})", c.r, c.p, c.n);
        }
        out
    }

    /// Long-form CSV: `a,b,r,p,n,error` for every lower-triangular pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,r,p,n,error\n");
        for (i, row) in self.columns.iter().enumerate() {
            for (j, col) in self.columns.iter().enumerate().take(i) {
                match &self.cells[i][j] {
                    Ok(c) => {
                        let _ = writeln!(out, "{row},{col},{},{},{},", c.r, c.p, c.n);
                    }
                    Err(e) => {
                        let _ = writeln!(out, "{row},{col},,,,\"{}\"", e.replace('"', "'"));
                    }
                }
            }
        }
        out
    }
}

/// Correlates every pair of `columns`. When `score` names one of them, the
/// other column with the largest |r| against it is reported as `best`.
pub fn correlation_matrix(
    table: &ResultsTable,
    columns: &[&str],
    score: Option<&str>,
    method: Method,
    missing: MissingPolicy,
) -> Result<CorrelationMatrix> {
    let mut data = Vec::with_capacity(columns.len());
    for &name in columns {
        data.push(
            table
                .column(name)
                .ok_or_else(|| Error::Parameter(format!("missing column '{name}'")))?,
        );
    }
    if let Some(s) = score {
        if !columns.contains(&s) {
            return Err(Error::Parameter(format!("score column '{s}' is not among the correlated columns")));
        }
    }
    if missing == MissingPolicy::CompleteRows {
        let complete: Vec<bool> = (0..table.len())
            .map(|r| data.iter().all(|col| col[r].is_some_and(f64::is_finite)))
            .collect();
        for col in &mut data {
            for (cell, &keep) in col.iter_mut().zip(&complete) {
                if !keep {
                    *cell = None;
                }
            }
        }
    }
    let corr = |a: &[Option<f64>], b: &[Option<f64>]| match method {
        Method::Pearson => pearson_pairwise(a, b),
        Method::Spearman => spearman_pairwise(a, b),
    };
    let mut cells = Vec::with_capacity(columns.len());
    for i in 0..columns.len() {
        cells.push((0..i).map(|j| corr(&data[i], &data[j]).map_err(|e| e.to_string())).collect::<Vec<_>>());
    }
    let mut matrix = CorrelationMatrix {
        columns: columns.iter().map(|s| s.to_string()).collect(),
        cells,
        score: score.map(str::to_string),
        best: None,
    };
    if let Some(s) = score {
        matrix.best = columns
            .iter()
            .filter(|&&c| c != s)
            .filter_map(|&c| match matrix.get(c, s) {
                Some(Ok(corr)) => Some((c.to_string(), corr)),
                _ => None,
            })
            .max_by(|a, b| a.1.r.abs().total_cmp(&b.1.r.abs()));
    }
    Ok(matrix)
}
