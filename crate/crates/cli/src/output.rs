//! Run manifests and CSV/JSON emission.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{Context, Result};
use serde_json::{json, Map, Value};

/// Shortest round-trip representation, in exponent form.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub struct Table {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Table {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

pub struct Manifest {
    pub command: String,
    pub config_hash: String,
    pub grid: String,
}

/// Tables produced by one command. `failures` counts rows whose numerical
/// computation failed; they are still written, with their status.
pub struct Report {
    pub manifest: Manifest,
    pub tables: Vec<Table>,
    pub failures: usize,
}

fn target(dir: &Path, command: &str, table: &str) -> PathBuf {
    dir.join(format!("{command}_{table}.csv"))
}

fn csv_bytes(report: &Report, table: &Table, outputs: &[String]) -> Result<Vec<u8>> {
    let m = &report.manifest;
    let mut buf = Vec::new();
    writeln!(buf, "# secres {}", env!("CARGO_PKG_VERSION"))?;
    writeln!(buf, "# command: {}", m.command)?;
    writeln!(buf, "# config_sha256: {}", m.config_hash)?;
    writeln!(buf, "# grid: {}", m.grid)?;
    writeln!(buf, "# table: {}", table.name)?;
    writeln!(buf, "# outputs: {}", outputs.join(" "))?;
    let mut w = csv::Writer::from_writer(buf);
    w.write_record(&table.header)?;
    for r in &table.rows {
        w.write_record(r)?;
    }
    Ok(w.into_inner()?)
}

fn json_value(report: &Report, outputs: &[String], wall: Duration) -> Value {
    let m = &report.manifest;
    let mut tables = Map::new();
    for t in &report.tables {
        let rows: Vec<Value> = t
            .rows
            .iter()
            .map(|r| {
                let mut o = Map::new();
                for (h, v) in t.header.iter().zip(r) {
                    let val = v.parse::<f64>().ok().filter(|x| x.is_finite()).map_or(json!(v), |x| json!(x));
                    o.insert((*h).to_string(), val);
                }
                Value::Object(o)
            })
            .collect();
        tables.insert(t.name.to_string(), Value::Array(rows));
    }
    json!({
        "manifest": {
            "tool": format!("secres {}", env!("CARGO_PKG_VERSION")),
            "command": m.command,
            "config_sha256": m.config_hash,
            "grid": m.grid,
            "outputs": outputs,
            "wall_time_s": wall.as_secs_f64(),
        },
        "tables": tables,
    })
}

/// Writes the report to `dir` (one CSV per table, or one JSON file) or to
/// stdout.
pub fn emit(report: &Report, command: &str, dir: Option<&Path>, as_json: bool, wall: Duration) -> Result<()> {
    let outputs: Vec<String> = match dir {
        None => vec!["-".into()],
        Some(d) if as_json => vec![d.join(format!("{command}.json")).display().to_string()],
        Some(d) => report.tables.iter().map(|t| target(d, command, t.name).display().to_string()).collect(),
    };
    if as_json {
        let text = serde_json::to_string_pretty(&json_value(report, &outputs, wall))? + "\n";
        match dir {
            None => std::io::stdout().write_all(text.as_bytes())?,
            Some(d) => {
                std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
                std::fs::write(&outputs[0], text).with_context(|| format!("writing {}", outputs[0]))?;
            }
        }
    } else {
        let mut stdout = std::io::stdout().lock();
        for t in &report.tables {
            let bytes = csv_bytes(report, t, &outputs)?;
            match dir {
                None => stdout.write_all(&bytes)?,
                Some(d) => {
                    std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
                    let path = target(d, command, t.name);
                    std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
                }
            }
        }
    }
    eprintln!("secres {command}: {:.3} s", wall.as_secs_f64());
    Ok(())
}
