//! Text formats: table CSV, pairs CSV and grid CSV.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! written file reads back to the identical values.

use std::collections::HashMap;

use csv::{ReaderBuilder, StringRecord, Trim};
use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::GridDensity;
use crate::table::ProbTable;

fn records(text: &str) -> Result<Vec<(u64, StringRecord)>> {
    let mut rdr = ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let line = rec.position().map_or(0, |p| p.line());
        out.push((line, rec));
    }
    Ok(out)
}

fn parse_number(field: &str, line: u64) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: `{field}` is not a number")))
}

fn parse_matrix(recs: &[(u64, StringRecord)]) -> Result<Array2<f64>> {
    let ncols = recs.first().map_or(0, |(_, r)| r.len());
    let mut data = Vec::with_capacity(recs.len() * ncols);
    for (line, rec) in recs {
        if rec.len() != ncols {
            return Err(Error::Parse(format!(
                "line {line}: expected {ncols} fields, found {}",
                rec.len()
            )));
        }
        for f in rec.iter() {
            data.push(parse_number(f, *line)?);
        }
    }
    Array2::from_shape_vec((recs.len(), ncols), data).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads `key=value` pairs from the first `#` comment line, if any.
fn header_fields(text: &str) -> HashMap<String, String> {
    let Some(line) = text.lines().map(str::trim).find(|l| !l.is_empty()) else {
        return HashMap::new();
    };
    let Some(rest) = line.strip_prefix('#') else {
        return HashMap::new();
    };
    rest.split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .map(|(k, v)| (k.trim().to_ascii_lowercase(), v.trim().to_string()))
        .collect()
}

/// Parses a numeric matrix. An optional first line `# rows=R cols=S` is
/// checked against the data; zeros are structural zeros.
pub fn parse_table(text: &str) -> Result<ProbTable> {
    let m = parse_matrix(&records(text)?)?;
    let header = header_fields(text);
    let get = |key: &str| -> Result<Option<usize>> {
        header
            .get(key)
            .map(|v| v.parse::<usize>().map_err(|_| Error::Parse(format!("bad header value {key}={v}"))))
            .transpose()
    };
    if let (Some(r), Some(c)) = (get("rows")?, get("cols")?) {
        if (r, c) != m.dim() {
            return Err(Error::ShapeMismatch {
                expected: (r, c),
                found: m.dim(),
            });
        }
    }
    ProbTable::new(m)
}

pub fn format_table(t: &ProbTable) -> String {
    let mut out = format!("# rows={} cols={}\n", t.nrows(), t.ncols());
    for row in t.probs().rows() {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Result of counting label pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub table: ProbTable,
    pub labels: LabelMap,
}

/// Labels in first-appearance order; position is the table index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelMap {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
}

fn is_header(rec: &StringRecord) -> bool {
    let names: Vec<String> = rec.iter().map(str::to_ascii_lowercase).collect();
    names.len() >= 2
        && names[0] == "x"
        && names[1] == "y"
        && names.get(2).is_none_or(|c| c == "count")
}

fn intern(labels: &mut Vec<String>, index: &mut HashMap<String, usize>, label: &str) -> usize {
    *index.entry(label.to_string()).or_insert_with(|| {
        labels.push(label.to_string());
        labels.len() - 1
    })
}

/// Counts co-occurrences from `x,y[,count]` rows. A header `x,y[,count]`
/// is skipped. Rows without a count column count once.
pub fn ingest_pairs(text: &str) -> Result<Ingested> {
    let mut recs = records(text)?;
    if recs.first().is_some_and(|(_, r)| is_header(r)) {
        recs.remove(0);
    }
    if recs.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    let (mut row_ix, mut col_ix) = (HashMap::new(), HashMap::new());
    let mut cells = Vec::with_capacity(recs.len());
    for (line, rec) in &recs {
        let count = match rec.len() {
            2 => 1.0,
            3 => {
                let c = parse_number(&rec[2], *line)?;
                if !c.is_finite() || c < 0.0 {
                    return Err(Error::Parse(format!("line {line}: count {c} must be a nonnegative number")));
                }
                c
            }
            n => return Err(Error::Parse(format!("line {line}: expected 2 or 3 fields, found {n}"))),
        };
        let i = intern(&mut rows, &mut row_ix, &rec[0]);
        let j = intern(&mut cols, &mut col_ix, &rec[1]);
        cells.push((i, j, count));
    }
    let mut counts = Array2::zeros((rows.len(), cols.len()));
    for (i, j, c) in cells {
        counts[[i, j]] += c;
    }
    let table = ProbTable::from_weights(counts)?;
    Ok(Ingested {
        table,
        labels: LabelMap { rows, cols },
    })
}

/// Parses a grid file: a `level=K` line followed by `2^K` rows of `2^K`
/// density values.
pub fn parse_grid(text: &str) -> Result<GridDensity> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or_else(|| Error::Parse("empty grid file".into()))?;
    let level: u32 = first
        .trim()
        .strip_prefix("level=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `level=K` header, found `{}`", first.trim())))?;
    if level == 0 || level > crate::grid::MAX_LEVEL {
        return Err(Error::OutOfRange(format!("grid level {level}")));
    }
    let body_start = text.find(first).map_or(0, |p| p + first.len());
    let m = parse_matrix(&records(&text[body_start..])?)?;
    let n = 1usize << level;
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::GridShape {
            level,
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    GridDensity::with_level(m, level)
}

pub fn format_grid(g: &GridDensity) -> String {
    let mut out = format!("level={}\n", g.level());
    for row in g.values().rows() {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Long-format surface for plotting: `i,j,x,y,value`. `coord` maps an
/// index to its position on the unit interval. NaN values are left empty.
pub fn format_surface(m: &Array2<f64>, coord: impl Fn(usize) -> f64) -> String {
    let mut out = String::from("i,j,x,y,value\n");
    for ((i, j), v) in m.indexed_iter() {
        let value = if v.is_nan() { String::new() } else { v.to_string() };
        out.push_str(&format!("{i},{j},{},{},{value}\n", coord(i), coord(j)));
    }
    out
}
