//! Table export as CSV (`n,l,K`) or JSON (`{"entries":[{"n","l","K"}]}`).
//! Values are always decimal strings; cells without a value are `?`.

use std::fmt;

use morsekit_core::exact::Integer;
use morsekit_core::table::{in_domain, KTable, TableError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub n: i64,
    pub l: i64,
    #[serde(rename = "K")]
    pub k: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TableExport {
    pub entries: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Which cells to export. A range is clipped to the domain unless
/// `with_unknown` is set; explicitly listed cells must be in the domain.
#[derive(Debug, Clone, Default)]
pub struct TableSpec {
    pub n_min: i64,
    pub n_max: i64,
    pub l_min: u32,
    pub l_max: u32,
    pub cells: Vec<(i64, u32)>,
    pub with_unknown: bool,
}

#[derive(Debug)]
pub enum ExportError {
    Domain { n: i64, l: u32 },
    Table(TableError),
    Csv(csv::Error),
    Json(serde_json::Error),
    BadValue(String),
}

impl fmt::Display for ExportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExportError::Domain { n, l } => {
                write!(f, "K_{n}^{l} has no value (pass --with-unknown to emit '?')")
            }
            ExportError::Table(e) => write!(f, "{e}"),
            ExportError::Csv(e) => write!(f, "csv: {e}"),
            ExportError::Json(e) => write!(f, "json: {e}"),
            ExportError::BadValue(s) => write!(f, "not a decimal integer: {s:?}"),
        }
    }
}

impl std::error::Error for ExportError {}

pub fn export_table(table: &mut KTable, spec: &TableSpec) -> Result<TableExport, ExportError> {
    let mut cells: Vec<(i64, u32)> = if spec.cells.is_empty() {
        (spec.l_min..=spec.l_max)
            .flat_map(|l| (spec.n_min..=spec.n_max).map(move |n| (n, l)))
            .filter(|&(n, l)| spec.with_unknown || in_domain(n, l))
            .collect()
    } else {
        spec.cells.clone()
    };
    cells.sort_by_key(|&(n, l)| (l, n));
    cells.dedup();
    let mut entries = Vec::with_capacity(cells.len());
    for (n, l) in cells {
        let k = match table.knl(n, l) {
            Ok(v) => v.to_string(),
            Err(TableError::OutOfDomain { .. }) if spec.with_unknown => "?".to_string(),
            Err(TableError::OutOfDomain { .. }) => return Err(ExportError::Domain { n, l }),
            Err(e) => return Err(ExportError::Table(e)),
        };
        entries.push(Row { n, l: l as i64, k });
    }
    Ok(TableExport { entries })
}

pub fn to_csv(t: &TableExport) -> Result<String, ExportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "l", "K"]).map_err(ExportError::Csv)?;
    for r in &t.entries {
        w.write_record([r.n.to_string(), r.l.to_string(), r.k.clone()]).map_err(ExportError::Csv)?;
    }
    let bytes = w.into_inner().map_err(|e| ExportError::BadValue(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(t: &TableExport) -> Result<String, ExportError> {
    serde_json::to_string_pretty(t).map_err(ExportError::Json)
}

pub fn render(t: &TableExport, format: Format) -> Result<String, ExportError> {
    match format {
        Format::Csv => to_csv(t),
        Format::Json => to_json(t).map(|s| s + "\n"),
    }
}

pub fn from_json(s: &str) -> Result<TableExport, ExportError> {
    serde_json::from_str(s).map_err(ExportError::Json)
}

/// Rows with values, as table entries; `?` rows are skipped.
pub fn to_entries(t: &TableExport) -> Result<Vec<(i64, u32, Integer)>, ExportError> {
    let mut out = Vec::new();
    for r in &t.entries {
        if r.k == "?" {
            continue;
        }
        let l = u32::try_from(r.l).map_err(|_| ExportError::BadValue(r.l.to_string()))?;
        let v: Integer = r.k.parse().map_err(|_| ExportError::BadValue(r.k.clone()))?;
        out.push((r.n, l, v));
    }
    Ok(out)
}

pub fn import_json(s: &str) -> Result<KTable, ExportError> {
    Ok(KTable::with_entries(to_entries(&from_json(s)?)?))
}
