//! CSV emission: a schema comment, a header, then rows.

use std::fmt::Write;

pub struct Table {
    text: String,
}

impl Table {
    pub fn new(schema: &str, header: &str) -> Self {
        Table { text: format!("# schema={schema} v1\n{header}\n") }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    /// Appends a preformatted row.
    pub fn raw(&mut self, line: &str) {
        self.text.push_str(line);
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn int(x: u64) -> String {
    x.to_string()
}

pub fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub fn opt_int(x: Option<u64>) -> String {
    x.map(int).unwrap_or_default()
}
