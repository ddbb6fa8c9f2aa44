//! Output files: CSV or JSON payloads with an embedded run manifest.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;
/// Prefix of the manifest line in CSV output.
pub const CSV_MANIFEST_PREFIX: &str = "# manifest: ";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    /// Full argument set of the run; feeding it back reproduces the file.
    pub parameters: Value,
    pub seed: Option<u64>,
    pub library_version: String,
    /// Seconds since the Unix epoch; only written with `--timestamp`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
    /// SHA-256 of the data payload (everything except the manifest).
    pub sha256: String,
    /// Extra run facts, e.g. resampling incidents.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub notes: Option<Value>,
}

/// Tabular payload rendered as CSV or JSON.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

fn fmt_cell(v: Option<f64>) -> String {
    match v {
        // both forms print the shortest string that round-trips
        Some(x) if x != 0.0 && (x.abs() < 1e-5 || x.abs() >= 1e16) => format!("{x:e}"),
        Some(x) if x.is_finite() => format!("{x}"),
        Some(x) => format!("{x}").to_lowercase(),
        None => String::new(),
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(s, "{b:02x}");
    }
    s
}

impl Table {
    pub fn csv_body(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| fmt_cell(*c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json_body(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| match c {
                            Some(x) if x.is_finite() => Value::from(*x),
                            _ => Value::Null,
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }
}

/// Renders `payload` with its manifest. For JSON the manifest sits next to
/// the payload under `manifest`; for CSV it is a leading comment line.
pub fn render(format: Format, mut manifest: RunManifest, payload: Payload) -> Result<String> {
    match format {
        Format::Csv => {
            let body = match payload {
                Payload::Table(t) => t.csv_body(),
                Payload::Json(_) => anyhow::bail!("this output is only available as JSON"),
            };
            manifest.sha256 = sha256_hex(body.as_bytes());
            Ok(format!(
                "{CSV_MANIFEST_PREFIX}{}\n{body}",
                serde_json::to_string(&manifest)?
            ))
        }
        Format::Json => {
            let data = match payload {
                Payload::Table(t) => t.json_body(),
                Payload::Json(v) => v,
            };
            manifest.sha256 = sha256_hex(&serde_json::to_vec(&data)?);
            let doc = serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "manifest": manifest,
                "data": data,
            });
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub enum Payload {
    Table(Table),
    Json(Value),
}

pub fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Extracts the manifest from a file written by [`render`].
pub fn read_manifest(text: &str) -> Result<RunManifest> {
    if let Some(rest) = text.strip_prefix(CSV_MANIFEST_PREFIX) {
        let line = rest.lines().next().unwrap_or_default();
        return Ok(serde_json::from_str(line)?);
    }
    let doc: Value = serde_json::from_str(text).context("file is neither CSV with a manifest nor JSON")?;
    let m = doc.get("manifest").cloned().context("JSON output has no manifest")?;
    Ok(serde_json::from_value(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> RunManifest {
        RunManifest {
            schema_version: SCHEMA_VERSION,
            command: "cdf".into(),
            parameters: serde_json::json!({"n": 3}),
            seed: None,
            library_version: "0.1.0".into(),
            timestamp: None,
            sha256: String::new(),
            notes: None,
        }
    }

    fn table() -> Table {
        Table {
            columns: vec!["x".into(), "y".into()],
            rows: vec![vec![Some(0.1), None], vec![Some(1e-300), Some(2.0)]],
        }
    }

    #[test]
    fn csv_shortest_round_trip() {
        let body = table().csv_body();
        assert_eq!(body, "x,y\n0.1,\n1e-300,2\n");
        for line in body.lines().skip(1) {
            for cell in line.split(',').filter(|c| !c.is_empty()) {
                let v: f64 = cell.parse().unwrap();
                assert_eq!(fmt_cell(Some(v)), cell);
            }
        }
    }

    #[test]
    fn manifest_round_trips() {
        for format in [Format::Csv, Format::Json] {
            let text = render(format, manifest(), Payload::Table(table())).unwrap();
            let m = read_manifest(&text).unwrap();
            assert_eq!(m.command, "cdf");
            assert_eq!(m.sha256.len(), 64);
        }
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
