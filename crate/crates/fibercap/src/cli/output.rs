use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// CSV table with a provenance comment line.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    /// Column names.
    pub header: Vec<String>,
    /// Rows, already formatted.
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    /// Empty table with the given columns.
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a row.
    pub fn push<D: Display>(&mut self, row: impl IntoIterator<Item = D>) {
        self.rows.push(row.into_iter().map(|d| d.to_string()).collect());
    }

    /// Writes `# ...` then the header and rows.
    pub fn write<W: Write + ?Sized>(&self, out: &mut W, comment: &str) -> io::Result<()> {
        writeln!(out, "# {comment}")?;
        writeln!(out, "{}", self.header.join(","))?;
        for r in &self.rows {
            writeln!(out, "{}", r.join(","))?;
        }
        Ok(())
    }
}

/// Writes `text` to `path`, or to standard output.
pub fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    let wrap = |source: io::Error| Error::Io {
        path: path.map(Path::to_path_buf).unwrap_or_else(|| "<stdout>".into()),
        source,
    };
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(wrap)?);
            write(&mut w).and_then(|_| w.flush()).map_err(wrap)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).and_then(|_| lock.flush()).map_err(wrap)
        }
    }
}

/// Float formatting used in every table.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else {
        format!("{v:.12e}")
    }
}
