//! Text formats. Functions, maps, curves and fields are column CSV with
//! optional `# key=value` header lines; reports and configs are JSON.
//! Every float is written with 17 significant digits.

use crate::curve::CurveSamples;
use crate::error::{Error, Result};
use crate::numerics::{HalfPlaneField, HalfPlaneGrid, LineGrid, MonotoneBoundaryMap, Orientation, SampledLineFunction};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;

pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Pretty JSON with floats in `{:.16e}` form; non-finite values become
/// `null`.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(format_float(value).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Digits17(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| Error::Invariant(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Invariant(e.to_string()))
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
}

/// Write through a sibling temporary file and rename over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("no file name in {}", path.display())))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::from(e)
    })
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Rows of a column table together with its `# key=value` metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: BTreeMap<String, String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Source line of each row.
    pub lines: Vec<usize>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            meta: BTreeMap::new(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.lines.push(self.rows.len() + 2 + self.meta.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&self.header.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|&v| format_float(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Parse CSV whose header must equal `expected`.
    pub fn parse(text: &str, expected: &[&str]) -> Result<Table> {
        let mut meta = BTreeMap::new();
        let mut body_start = 0;
        let mut skipped = 0;
        for (i, raw) in text.split_inclusive('\n').enumerate() {
            let t = raw.trim();
            if let Some(rest) = t.strip_prefix('#') {
                let (k, v) = rest.split_once('=').ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: "metadata must read '# key=value'".into(),
                })?;
                meta.insert(k.trim().to_string(), v.trim().to_string());
            } else if !t.is_empty() {
                break;
            }
            body_start += raw.len();
            skipped += 1;
        }
        let body = text.get(body_start.min(text.len())..).unwrap_or("");
        let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(body.as_bytes());
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| Error::Parse { line: skipped + 1, message: e.to_string() })?
            .iter()
            .map(|s| s.to_string())
            .collect();
        if header != expected {
            return Err(Error::Parse {
                line: skipped + 1,
                message: format!("expected columns {}, found {}", expected.join(","), header.join(",")),
            });
        }
        let mut rows = Vec::new();
        let mut lines = Vec::new();
        for rec in reader.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map(|p| p.line() as usize).unwrap_or(0) + skipped;
                Error::Parse { line, message: e.to_string() }
            })?;
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0) + skipped;
            if rec.len() != expected.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {} fields, found {}", expected.len(), rec.len()),
                });
            }
            let row = rec
                .iter()
                .enumerate()
                .map(|(j, cell)| {
                    cell.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("column {}: '{cell}' is not a number", expected[j]),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse { line, message: "non-finite value".into() });
            }
            rows.push(row);
            lines.push(line);
        }
        if rows.is_empty() {
            return Err(Error::Parse { line: skipped + 1, message: "no data rows".into() });
        }
        Ok(Table { meta, header, rows, lines })
    }

    fn meta_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.meta.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| Error::Parse {
                line: 1,
                message: format!("metadata {key}: '{v}' is not a number"),
            }),
        }
    }

    fn meta_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.meta.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<usize>().map(Some).map_err(|_| Error::Parse {
                line: 1,
                message: format!("metadata {key}: '{v}' is not a count"),
            }),
        }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    fn complex(&self, re: usize, im: usize) -> Vec<Complex64> {
        self.rows.iter().map(|r| Complex64::new(r[re], r[im])).collect()
    }
}

fn rewrap(e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::Parse { line: 0, message: other.to_string() },
    }
}

pub const FUNCTION_COLUMNS: [&str; 3] = ["x", "re", "im"];
pub const CURVE_COLUMNS: [&str; 3] = ["s", "re", "im"];
pub const FIELD_COLUMNS: [&str; 4] = ["x", "y", "re", "im"];

pub fn function_to_csv(f: &SampledLineFunction) -> String {
    let mut t = Table::new(&FUNCTION_COLUMNS);
    if let Some(s) = f.support() {
        t.meta.insert("support".into(), format_float(s));
    }
    for (x, v) in f.nodes().iter().zip(f.values()) {
        t.push(vec![*x, v.re, v.im]);
    }
    t.to_csv()
}

pub fn function_from_csv(text: &str) -> Result<SampledLineFunction> {
    let t = Table::parse(text, &FUNCTION_COLUMNS)?;
    let support = t.meta_f64("support")?;
    let grid = Arc::new(LineGrid::from_nodes(t.column(0)).map_err(rewrap)?);
    SampledLineFunction::new(grid, t.complex(1, 2), support).map_err(rewrap)
}

/// Maps are stored like functions; `monotone=true` marks real increasing
/// maps.
pub fn map_to_csv(h: &MonotoneBoundaryMap) -> String {
    let mut t = Table::new(&FUNCTION_COLUMNS);
    t.meta.insert("monotone".into(), h.is_monotone_real().to_string());
    for (x, v) in h.nodes().iter().zip(h.values()) {
        t.push(vec![*x, v.re, v.im]);
    }
    t.to_csv()
}

pub fn map_from_csv(text: &str) -> Result<MonotoneBoundaryMap> {
    let t = Table::parse(text, &FUNCTION_COLUMNS)?;
    let monotone = t.meta.get("monotone").map(|v| v == "true").unwrap_or(false);
    MonotoneBoundaryMap::new(t.column(0), t.complex(1, 2), monotone).map_err(rewrap)
}

pub fn curve_to_csv(c: &CurveSamples) -> String {
    let mut t = Table::new(&CURVE_COLUMNS);
    for (s, z) in c.arc().iter().zip(c.points()) {
        t.push(vec![*s, z.re, z.im]);
    }
    t.to_csv()
}

pub fn curve_from_csv(text: &str) -> Result<CurveSamples> {
    let t = Table::parse(text, &CURVE_COLUMNS)?;
    CurveSamples::new(t.complex(1, 2), t.column(0)).map_err(rewrap)
}

pub fn field_to_csv(f: &HalfPlaneField) -> String {
    let g = f.grid();
    let mut t = Table::new(&FIELD_COLUMNS);
    t.meta.insert("levels".into(), g.levels().to_string());
    t.meta.insert("sub_levels".into(), g.sub_levels().to_string());
    for j in 0..g.rows() {
        for k in 0..g.cols() {
            let z = g.point(j, k);
            let v = f.at(j, k);
            t.push(vec![z.re, z.im, v.re, v.im]);
        }
    }
    t.to_csv()
}

pub fn field_from_csv(text: &str) -> Result<HalfPlaneField> {
    let t = Table::parse(text, &FIELD_COLUMNS)?;
    let y0 = t.rows[0][1];
    let cols = t.rows.iter().take_while(|r| r[1] == y0).count();
    if t.rows.len() % cols != 0 {
        return Err(Error::Parse { line: t.lines[t.rows.len() - 1], message: "ragged field rows".into() });
    }
    let orientation = if y0 > 0.0 { Orientation::Upper } else { Orientation::Lower };
    let xs: Vec<f64> = t.rows[..cols].iter().map(|r| r[0]).collect();
    let mut heights = Vec::new();
    for (i, r) in t.rows.iter().enumerate() {
        let k = i % cols;
        if k == 0 {
            heights.push(r[1].abs());
        }
        if r[0] != xs[k] || r[1] != t.rows[i - k][1] || r[1] * y0 <= 0.0 {
            return Err(Error::Parse { line: t.lines[i], message: "field rows do not form a grid".into() });
        }
    }
    let x = LineGrid::from_nodes(xs).map_err(rewrap)?;
    let levels = t.meta_usize("levels")?.unwrap_or(heights.len());
    let sub = t.meta_usize("sub_levels")?.unwrap_or(1);
    let grid = HalfPlaneGrid::with_levels(x, heights, levels, sub, orientation).map_err(rewrap)?;
    HalfPlaneField::new(Arc::new(grid), t.complex(2, 3)).map_err(rewrap)
}

/// Plot series: one column per name.
pub fn series_to_csv(names: &[&str], rows: &[Vec<f64>]) -> String {
    let mut t = Table::new(names);
    for r in rows {
        t.push(r.clone());
    }
    t.to_csv()
}
