//! Typed result tables and their CSV/JSON encodings.
//!
//! CSV layout: one `# {json}` metadata line, a header row, then data rows.
//! Reals are written in shortest round-trip form, so reading a file back
//! reproduces every value bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::error::{config_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnType {
    Int,
    Real,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: ColumnType,
}

impl Column {
    pub fn int(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: ColumnType::Int }
    }

    pub fn real(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: ColumnType::Real }
    }

    pub fn text(name: impl Into<String>) -> Self {
        Self { name: name.into(), kind: ColumnType::Text }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn kind(&self) -> ColumnType {
        match self {
            Cell::Int(_) => ColumnType::Int,
            Cell::Real(_) => ColumnType::Real,
            Cell::Text(_) => ColumnType::Text,
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(i) => Some(*i as f64),
            Cell::Real(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    /// Appends a row after checking its arity and cell types. Reals must be
    /// finite; text must not contain separators.
    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(HarnessError::Core(kpzlab::Error::Consistency(format!(
                "row has {} cells for {} columns",
                row.len(),
                self.columns.len()
            ))));
        }
        for (c, col) in row.iter().zip(&self.columns) {
            let bad = c.kind() != col.kind
                || matches!(c, Cell::Real(x) if !x.is_finite())
                || matches!(c, Cell::Text(s) if s.contains([',', '\n', '\r']));
            if bad {
                return Err(HarnessError::Core(kpzlab::Error::Consistency(format!(
                    "cell {c:?} does not fit column {}",
                    col.name
                ))));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Numeric values of a column.
    pub fn column_f64(&self, name: &str) -> Result<Vec<f64>> {
        let Some(j) = self.column_index(name) else {
            return config_err(format!(
                "no column {name:?} (have {})",
                self.columns.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
            ));
        };
        self.rows
            .iter()
            .map(|r| {
                r[j].as_f64()
                    .ok_or_else(|| HarnessError::Config(format!("column {name:?} is not numeric")))
            })
            .collect()
    }
}

/// Output of one experiment: a data table, the metadata that reproduces it,
/// and a summary of derived statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metadata: Map<String, Value>,
    pub table: Table,
    pub summary: Map<String, Value>,
}

impl Report {
    /// Metadata with the column schema attached.
    fn full_metadata(&self) -> Map<String, Value> {
        let mut m = self.metadata.clone();
        m.insert("columns".into(), json!(self.table.columns));
        m
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.full_metadata())?;
        writeln!(out, "# {meta}").unwrap();
        let header: Vec<&str> = self.table.columns.iter().map(|c| c.name.as_str()).collect();
        writeln!(out, "{}", header.join(",")).unwrap();
        for row in &self.table.rows {
            for (j, c) in row.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                match c {
                    Cell::Int(i) => write!(out, "{i}").unwrap(),
                    Cell::Real(x) => write!(out, "{x:?}").unwrap(),
                    Cell::Text(s) => out.push_str(s),
                }
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .table
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({
            "metadata": self.full_metadata(),
            "rows": rows,
            "summary": self.summary,
        });
        let mut s = serde_json::to_string_pretty(&doc)?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Metadata and table read back from a CSV or JSON file written by
/// [`Report::render`].
#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub metadata: Map<String, Value>,
    pub table: Table,
}

fn parse_cell(text: &str, kind: ColumnType) -> Option<Cell> {
    match kind {
        ColumnType::Int => text.parse().ok().map(Cell::Int),
        ColumnType::Real => text.parse().ok().filter(|x: &f64| x.is_finite()).map(Cell::Real),
        ColumnType::Text => Some(Cell::Text(text.to_string())),
    }
}

fn declared_columns(metadata: &Map<String, Value>) -> Result<Vec<Column>> {
    let cols = metadata
        .get("columns")
        .ok_or_else(|| HarnessError::Config("metadata lacks the column schema".into()))?;
    serde_json::from_value(cols.clone())
        .map_err(|e| HarnessError::Config(format!("bad column schema: {e}")))
}

/// Parse a CSV document. The header must match the declared schema and every
/// cell must parse as its declared type.
pub fn parse_csv(text: &str) -> Result<DataFile> {
    let mut lines = text.lines();
    let meta = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| HarnessError::Config("missing '#' metadata line".into()))?;
    let metadata: Map<String, Value> = serde_json::from_str(meta.trim())
        .map_err(|e| HarnessError::Config(format!("bad metadata line: {e}")))?;
    let columns = declared_columns(&metadata)?;
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::Config("missing header row".into()))?;
    let names: Vec<&str> = header.split(',').collect();
    if names.len() != columns.len() || names.iter().zip(&columns).any(|(n, c)| *n != c.name) {
        return config_err(format!("header {header:?} does not match the declared columns"));
    }
    let mut table = Table::new(columns);
    for (no, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != table.columns.len() {
            return config_err(format!("row {}: expected {} fields", no + 1, table.columns.len()));
        }
        let row = parts
            .iter()
            .zip(&table.columns)
            .map(|(p, c)| {
                parse_cell(p, c.kind).ok_or_else(|| {
                    HarnessError::Config(format!("row {}: {p:?} is not a valid {:?}", no + 1, c.kind))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
    }
    Ok(DataFile { metadata, table })
}

/// Parse the JSON mirror.
pub fn parse_json(text: &str) -> Result<DataFile> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| HarnessError::Config(format!("bad JSON: {e}")))?;
    let metadata = doc
        .get("metadata")
        .and_then(Value::as_object)
        .cloned()
        .ok_or_else(|| HarnessError::Config("JSON lacks metadata".into()))?;
    let mut table = Table::new(declared_columns(&metadata)?);
    let rows = doc
        .get("rows")
        .and_then(Value::as_array)
        .ok_or_else(|| HarnessError::Config("JSON lacks rows".into()))?;
    for r in rows {
        let cells = r
            .as_array()
            .filter(|c| c.len() == table.columns.len())
            .ok_or_else(|| HarnessError::Config("JSON row has the wrong arity".into()))?;
        let row = cells
            .iter()
            .zip(&table.columns)
            .map(|(v, c)| {
                let cell = match c.kind {
                    ColumnType::Int => v.as_i64().map(Cell::Int),
                    ColumnType::Real => v.as_f64().map(Cell::Real),
                    ColumnType::Text => v.as_str().map(Cell::from),
                };
                cell.ok_or_else(|| HarnessError::Config(format!("{v} is not a valid {:?}", c.kind)))
            })
            .collect::<Result<Vec<_>>>()?;
        table.rows.push(row);
    }
    Ok(DataFile { metadata, table })
}

/// Read a data file, detecting the format from its first character.
pub fn read_data_file(path: &Path) -> Result<DataFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}
