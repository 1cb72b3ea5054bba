use serde::Serialize;

use crate::error::{Error, Result};

/// One table entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    /// CSV form: 17 significant digits for floats.
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) => x.to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// A numeric table with the hash of the job that produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub config_hash: String,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            config_hash: String::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// RFC 4180 CSV; the config hash is the last column of every row.
    pub fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        let err = |e: csv::Error| Error::Invalid(e.to_string());
        let mut header = self.columns.clone();
        header.push("config_hash".into());
        w.write_record(&header).map_err(err)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.iter().map(Cell::csv).collect();
            rec.push(self.config_hash.clone());
            w.write_record(&rec).map_err(err)?;
        }
        w.into_inner().map_err(|e| Error::Invalid(e.to_string()))
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let mut v = serde_json::to_vec_pretty(self).map_err(|e| Error::Invalid(e.to_string()))?;
        v.push(b'\n');
        Ok(v)
    }
}
