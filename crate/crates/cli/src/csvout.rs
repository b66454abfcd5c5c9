//! Deterministic CSV emission.
//!
//! The format is part of the interface: `.` decimal separator, 17
//! significant digits for floats, LF line endings, `#`-prefixed metadata
//! comments. Identical inputs must produce identical bytes.

use std::fmt::Write as _;

/// A float with 17 significant digits (`{:.16e}`), locale-independent.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// In-memory CSV builder; the whole file is rendered before touching disk
/// so byte-comparison between runs is trivial.
#[derive(Debug, Default, Clone)]
pub struct CsvBuilder {
    buf: String,
}

impl CsvBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// `# key=value` metadata line.
    pub fn comment(&mut self, text: &str) -> &mut Self {
        let _ = writeln!(self.buf, "# {text}");
        self
    }

    pub fn header(&mut self, columns: &[&str]) -> &mut Self {
        let _ = writeln!(self.buf, "{}", columns.join(","));
        self
    }

    /// One row of pre-rendered fields.
    pub fn row(&mut self, fields: &[String]) -> &mut Self {
        let _ = writeln!(self.buf, "{}", fields.join(","));
        self
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
