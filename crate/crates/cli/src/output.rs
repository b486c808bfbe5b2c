use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, Format};

/// Square grid of real values; row index is `x`.
#[derive(Clone, Debug, Serialize)]
pub struct GridData {
    pub points: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Payload {
    Grid(GridData),
    Table(Table),
    Report(Value),
}

#[derive(Clone, Debug)]
pub struct Artifact {
    pub path: PathBuf,
    /// One-line description for the CSV header.
    pub quantity: String,
    pub payload: Payload,
}

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn settings_line(config: &ExperimentConfig) -> String {
    format!(
        "modes={} alpha={} phase={} perm={} grid={} cutoff={} length={} offset={} spacing={}",
        config.modes,
        config.alpha,
        config.phase,
        config.perm,
        config.grid,
        config.cutoff,
        config.length,
        config.offset,
        config.spacing
    )
}

fn csv_text(artifact: &Artifact, config: &ExperimentConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# experiment: {}", config.experiment);
    let _ = writeln!(s, "# quantity: {}", artifact.quantity);
    let _ = writeln!(s, "# {}", settings_line(config));
    match &artifact.payload {
        Payload::Grid(g) => {
            let _ = writeln!(s, "# columns: x,y,value");
            let n = g.points.len();
            for a in 0..n {
                for b in 0..n {
                    let _ = writeln!(
                        s,
                        "{},{},{}",
                        float(g.points[a]),
                        float(g.points[b]),
                        float(g.values[a * n + b])
                    );
                }
            }
        }
        Payload::Table(t) => {
            let _ = writeln!(s, "# columns: {}", t.columns.join(","));
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(|&v| float(v)).collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
        }
        Payload::Report(v) => {
            let _ = writeln!(s, "# columns: fixture,check,expected,status");
            if let Some(items) = v.get("outcomes").and_then(Value::as_array) {
                for o in items {
                    let field = |k: &str| o.get(k).and_then(Value::as_str).unwrap_or("").to_string();
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        field("fixture"),
                        field("check"),
                        field("expected"),
                        o.pointer("/report/status").and_then(Value::as_str).unwrap_or("")
                    );
                }
            }
        }
    }
    s
}

fn json_text(artifact: &Artifact, config: &ExperimentConfig) -> Result<String> {
    #[derive(Serialize)]
    struct Doc<'a> {
        experiment: String,
        quantity: &'a str,
        data: &'a Payload,
    }
    let doc = Doc {
        experiment: config.experiment.to_string(),
        quantity: &artifact.quantity,
        data: &artifact.payload,
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

pub fn write_artifact(artifact: &Artifact, config: &ExperimentConfig) -> Result<()> {
    let text = match config.format {
        Format::Csv => csv_text(artifact, config),
        Format::Json => json_text(artifact, config)?,
    };
    if let Some(parent) = artifact.path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    fs::write(&artifact.path, text).with_context(|| format!("writing {}", artifact.path.display()))
}

pub fn config_hash(config: &ExperimentConfig) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    library_version: &'static str,
    experiment: String,
    config_sha256: String,
    config: &'a ExperimentConfig,
    seed: Option<u64>,
    artifacts: Vec<String>,
    tolerances: &'a BTreeMap<String, f64>,
    summary: &'a BTreeMap<String, Value>,
}

pub fn write_meta(
    config: &ExperimentConfig,
    artifacts: &[Artifact],
    tolerances: &BTreeMap<String, f64>,
    summary: &BTreeMap<String, Value>,
) -> Result<PathBuf> {
    let meta = Meta {
        tool: "coherlab",
        version: env!("CARGO_PKG_VERSION"),
        library_version: coherlab::VERSION,
        experiment: config.experiment.to_string(),
        config_sha256: config_hash(config),
        config,
        seed: config.seed(),
        artifacts: artifacts.iter().map(|a| a.path.display().to_string()).collect(),
        tolerances,
        summary,
    };
    let path = meta_path(&config.out);
    fs::write(&path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// `<stem>_<suffix>.<ext>` next to `out`.
pub fn suffixed(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}_{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{suffix}"),
    };
    out.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(float(0.166), "1.6600000000000001e-1");
        assert_eq!(float(0.0), "0.0000000000000000e0");
        assert_eq!(float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn derived_paths() {
        assert_eq!(meta_path(Path::new("out/a.csv")), PathBuf::from("out/a.csv.meta.json"));
        assert_eq!(suffixed(Path::new("out/g2.csv"), "boson"), PathBuf::from("out/g2_boson.csv"));
    }
}
