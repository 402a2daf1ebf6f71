//! Deterministic CSV assembly.
//!
//! Every number goes through one of two formatters so the emitted bytes are
//! reproducible across runs and platforms: measured quantities in scientific
//! notation with six significant digits, exact inputs (theta, t written from
//! closed-form step counts) through plain `{}`.

/// Scientific notation, six significant digits: `1.38000e-5`.
pub fn sci(x: f64) -> String {
    // -0.0 would print with a sign yet compare equal; fold it first.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.5e}")
}

/// Plain display for values that are exact by construction.
pub fn plain(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}

pub struct CsvBuilder {
    buf: String,
}

impl CsvBuilder {
    pub fn new(header: &str) -> Self {
        let mut buf = String::new();
        buf.push_str(header);
        buf.push('\n');
        CsvBuilder { buf }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.buf.push_str(&fields.join(","));
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
