//! Tabular output as CSV or JSON.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Missing(Option<()>),
}

impl Cell {
    pub fn missing() -> Self {
        Cell::Missing(None)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Int(i) => Some(i as f64),
            Cell::Float(x) => Some(x),
            Cell::Missing(_) => None,
        }
    }

    fn csv_text(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Missing(_) => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u32> for Cell {
    fn from(i: u32) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::missing(), Cell::Float)
    }
}

/// Named columns; the first column is the strictly increasing key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl TimeSeries {
    pub fn new<I: IntoIterator<Item = &'static str>>(columns: I) -> Self {
        TimeSeries {
            columns: columns.into_iter().map(str::to_owned).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Every row has the header's arity and the key column strictly
    /// increases.
    pub fn is_well_formed(&self) -> bool {
        let width = self.columns.len();
        if width == 0 || self.rows.iter().any(|r| r.len() != width) {
            return false;
        }
        self.rows
            .windows(2)
            .all(|w| match (w[0][0].as_f64(), w[1][0].as_f64()) {
                (Some(a), Some(b)) => a < b,
                _ => false,
            })
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn to_bytes(series: &TimeSeries, format: Format) -> CliResult<Vec<u8>> {
    if !series.is_well_formed() {
        return Err(CliError::Tolerance("malformed series".into()));
    }
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            let csv_err = |e: csv::Error| CliError::Tolerance(format!("csv encoding: {e}"));
            w.write_record(&series.columns).map_err(csv_err)?;
            for row in &series.rows {
                w.write_record(row.iter().map(Cell::csv_text))
                    .map_err(csv_err)?;
            }
            w.into_inner()
                .map_err(|e| CliError::Tolerance(format!("csv encoding: {e}")))
        }
        Format::Json => {
            let mut out = serde_json::to_vec(series)
                .map_err(|e| CliError::Tolerance(format!("json encoding: {e}")))?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

/// Writes the series to `out`, or standard output when `None`. Returns the
/// number of bytes written.
pub fn emit(
    series: &TimeSeries,
    format: Format,
    out: Option<&std::path::Path>,
) -> CliResult<usize> {
    let bytes = to_bytes(series, format)?;
    match out {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(&bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })?
        }
    }
    Ok(bytes.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_csv() {
        let s = TimeSeries::new(["t", "x"]);
        assert_eq!(to_bytes(&s, Format::Csv).unwrap(), b"t,x\n");
    }

    #[test]
    fn three_lines() {
        let mut s = TimeSeries::new(["t", "x", "n"]);
        s.push(vec![0.0.into(), 0.1.into(), 3u32.into()]);
        s.push(vec![0.5.into(), (-2.0).into(), 4u32.into()]);
        let text = String::from_utf8(to_bytes(&s, Format::Csv).unwrap()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "0.0000000000000000e0,1.0000000000000001e-1,3"
        );
    }

    #[test]
    fn rejects_non_increasing_key() {
        let mut s = TimeSeries::new(["t"]);
        s.push(vec![1.0.into()]);
        s.push(vec![1.0.into()]);
        assert!(to_bytes(&s, Format::Json).is_err());
    }

    #[test]
    fn missing_cells() {
        let mut s = TimeSeries::new(["n", "d"]);
        s.push(vec![1u32.into(), None.into()]);
        assert_eq!(to_bytes(&s, Format::Csv).unwrap(), b"n,d\n1,\n");
        let json = String::from_utf8(to_bytes(&s, Format::Json).unwrap()).unwrap();
        assert_eq!(json.trim(), r#"{"columns":["n","d"],"rows":[[1,null]]}"#);
        let back: TimeSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
