//! JSON and CSV outputs. Every artifact carries the schema version and the
//! resolved configuration that produced it.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const SCHEMA: &str = "cfdim/1";

#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub command: String,
    pub config: Value,
    pub result: Value,
}

impl Artifact {
    pub fn new(command: &str, config: Value, result: Value) -> Self {
        Artifact { command: command.into(), config, result }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "result": self.result,
        })
    }

    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("json values always serialize");
        s.push('\n');
        s
    }

    /// Writes to `path`, or stdout when `None`.
    pub fn write(&self, path: Option<&Path>) -> Result<()> {
        write_text(path, &self.render())
    }
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// `{"exact": "p/q", "f64": ...}`
pub fn exact(r: &Rational) -> Value {
    json!({ "exact": r.to_string(), "f64": r.to_f64() })
}

pub fn exact_opt(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, exact)
}

/// CSV text preceded by `# schema=...` and `# config=...` comment lines.
///
/// Readers should skip lines starting with `#` (`csv::ReaderBuilder::comment`).
pub fn csv_with_header(config: &Value, headers: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut buf = format!("# schema={SCHEMA}\n# config={config}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(headers).map_err(|e| Error::Parse(e.to_string()))?;
        for r in rows {
            w.write_record(r).map_err(|e| Error::Parse(e.to_string()))?;
        }
        w.flush()?;
    }
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}
