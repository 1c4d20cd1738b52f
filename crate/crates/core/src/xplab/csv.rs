//! Minimal CSV table with a guaranteed parse → emit byte round trip.
//!
//! Cells are plain tokens (numbers, labels); commas, newlines and quoting
//! are rejected at emission time instead of escaped. Leading `#` lines
//! carry provenance (the config hash) and survive the round trip.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        CsvTable {
            comments: Vec::new(),
            header,
            rows: Vec::new(),
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comments.push(comment.into());
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn emit(&self) -> Result<String> {
        let mut out = String::new();
        for c in &self.comments {
            if c.contains('\n') {
                return Err(Error::invalid("CSV comment must be a single line"));
            }
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        for line in std::iter::once(&self.header).chain(self.rows.iter()) {
            if line.len() != self.header.len() {
                return Err(Error::invalid("CSV row width differs from header"));
            }
            for (i, cell) in line.iter().enumerate() {
                if cell.contains(',') || cell.contains('\n') || cell.starts_with('#') {
                    return Err(Error::invalid(format!("CSV cell needs escaping: {cell:?}")));
                }
                if i > 0 {
                    out.push(',');
                }
                out.push_str(cell);
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<CsvTable> {
        let mut comments = Vec::new();
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# ") {
                if header.is_none() {
                    comments.push(rest.to_string());
                    continue;
                }
                return Err(Error::invalid("comment after header is not supported"));
            }
            let cells: Vec<String> = line.split(',').map(str::to_string).collect();
            match header {
                None => header = Some(cells),
                Some(ref h) => {
                    if cells.len() != h.len() {
                        return Err(Error::invalid(format!(
                            "row width {} differs from header width {}",
                            cells.len(),
                            h.len()
                        )));
                    }
                    rows.push(cells);
                }
            }
        }
        Ok(CsvTable {
            comments,
            header: header.ok_or_else(|| Error::invalid("empty CSV"))?,
            rows,
        })
    }
}

/// Shortest-round-trip float formatting shared by all emitters; `{}` on f64
/// prints the minimal digits that parse back to the same bits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
