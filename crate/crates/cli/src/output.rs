use std::fs;
use std::io::Write;
use std::path::Path;

/// A CSV table with a header row, `\n` line endings and floats written with
/// 17 significant digits.
#[derive(Debug, Default)]
pub struct Csv {
    text: String,
    columns: usize,
}

pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
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

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

pub fn float(v: f64) -> String {
    if v == 0.0 {
        // drop the sign of negative zero
        format!("{:.16e}", 0.0)
    } else if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

impl Csv {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut c = Csv { text: String::new(), columns: header.len() };
        c.line(header.iter().map(|h| h.as_ref().to_string()).collect());
        c
    }

    fn line(&mut self, cells: Vec<String>) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns);
        let out = cells
            .into_iter()
            .map(|c| match c {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => float(v),
                Cell::Text(v) => v,
            })
            .collect();
        self.line(out);
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// Pretty JSON with lexicographically ordered keys and a trailing newline.
pub fn json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut c = Csv::new(&["n", "value", "tag"]);
        c.row(vec![2usize.into(), 0.1.into(), "x".into()]);
        assert_eq!(c.as_str(), "n,value,tag\n2,1.0000000000000001e-1,x\n");
    }

    #[test]
    fn json_keys_sorted() {
        let v = serde_json::json!({"zeta": 1, "alpha": 2});
        assert_eq!(json(&v), "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}\n");
    }
}
