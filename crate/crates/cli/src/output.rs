use std::io::Write;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::args::Format;

/// One output cell. Counts travel as decimal strings.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Count(u128),
    Float(f64),
    Bool(bool),
    Text(String),
    Null,
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Null, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Count(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(v) => s.serialize_i64(*v),
            Cell::Count(v) => s.serialize_str(&v.to_string()),
            Cell::Float(v) if v.is_finite() => s.serialize_f64(*v),
            Cell::Float(_) | Cell::Null => s.serialize_none(),
            Cell::Bool(v) => s.serialize_bool(*v),
            Cell::Text(v) => s.serialize_str(v),
        }
    }
}

/// Ordered key/value pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Record(Vec<(&'static str, Cell)>);

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    pub fn with(mut self, key: &'static str, value: impl Into<Cell>) -> Self {
        self.0.push((key, value.into()));
        self
    }

    pub fn count(self, key: &'static str, value: u128) -> Self {
        self.with(key, Cell::Count(value))
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A single record prints as a JSON object, a table as a JSON array.
pub enum Output {
    One(Record),
    Table(Vec<Record>),
}

pub fn write(out: &Output, format: Format, mut w: impl Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            match out {
                Output::One(r) => serde_json::to_writer(&mut w, r)?,
                Output::Table(rows) => serde_json::to_writer(&mut w, rows)?,
            }
            writeln!(w)
        }
        Format::Csv => {
            let rows = match out {
                Output::One(r) => std::slice::from_ref(r),
                Output::Table(rows) => rows.as_slice(),
            };
            let mut csv = csv::Writer::from_writer(w);
            if let Some(first) = rows.first() {
                csv.write_record(first.0.iter().map(|(k, _)| *k))?;
            }
            for r in rows {
                csv.write_record(r.0.iter().map(|(_, v)| v.csv()))?;
            }
            csv.flush()
        }
    }
}
