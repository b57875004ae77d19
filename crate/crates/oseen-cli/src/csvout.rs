//! CSV artifacts: `#`-prefixed metadata header, a column-name row, data
//! rows, optional `#`-prefixed footer. Floats are rendered with Rust's
//! shortest round-trip formatting, so identical inputs produce identical
//! bytes and readers recover the exact binary values.

use std::path::Path;

/// In-memory CSV document, rendered and written in one shot on the main
/// thread (all artifact output is serialized through this single writer).
pub struct CsvDoc {
    header: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    footer: Vec<String>,
}

impl CsvDoc {
    pub fn new(command: &str, meta: Vec<String>, columns: &[&'static str]) -> Self {
        let mut header = vec![format!("command: {command}")];
        header.extend(meta);
        CsvDoc {
            header,
            columns: columns.to_vec(),
            rows: Vec::new(),
            footer: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn push_footer(&mut self, line: String) {
        self.footer.push(line);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.header {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for line in &self.footer {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.render())
    }
}

/// Shortest decimal string that round-trips to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Compact slug for embedding a numeric parameter in a file name
/// (`1e4`, `8.4e1`, `-5e-1`); deterministic and extension-safe.
pub fn num_slug(x: f64) -> String {
    format!("{x:e}").replace('-', "m")
}
