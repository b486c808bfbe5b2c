use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

pub enum PlotOutcome {
    Script(PathBuf),
    /// No script for this artifact kind; the message says why.
    Skipped(String),
}

pub fn script_path(artifact: &Path) -> PathBuf {
    artifact.with_extension("gp")
}

struct Header {
    experiment: String,
    quantity: String,
    columns: Vec<String>,
    length: f64,
}

fn read_header(path: &Path) -> Result<Header> {
    let file = fs::File::open(path).with_context(|| format!("artifact {} not found", path.display()))?;
    let mut header = Header { experiment: String::new(), quantity: String::new(), columns: Vec::new(), length: 1.0 };
    for line in BufReader::new(file).lines() {
        let line = line?;
        let Some(comment) = line.strip_prefix("# ") else { break };
        if let Some(v) = comment.strip_prefix("experiment: ") {
            header.experiment = v.to_string();
        } else if let Some(v) = comment.strip_prefix("quantity: ") {
            header.quantity = v.to_string();
        } else if let Some(v) = comment.strip_prefix("columns: ") {
            header.columns = v.split(',').map(str::to_string).collect();
        } else if let Some(l) = comment.split(' ').find_map(|kv| kv.strip_prefix("length=")) {
            header.length = l.parse().unwrap_or(1.0);
        }
    }
    Ok(header)
}

fn heatmap(data: &str, h: &Header) -> String {
    let png = Path::new(data).with_extension("png");
    format!(
        "set terminal pngcairo size 800,700\n\
         set output '{png}'\n\
         set datafile separator ','\n\
         set title \"{title}\" noenhanced\n\
         set xlabel 'x'\n\
         set ylabel 'y'\n\
         set xrange [0:{l}]\n\
         set yrange [0:{l}]\n\
         set size ratio -1\n\
         set view map\n\
         set palette rgb 33,13,10\n\
         plot '{data}' using 1:2:3 with image notitle\n",
        png = png.display(),
        title = h.quantity,
        l = h.length,
    )
}

fn line_plot(data: &str, h: &Header) -> String {
    let png = Path::new(data).with_extension("png");
    format!(
        "set terminal pngcairo size 800,600\n\
         set output '{png}'\n\
         set datafile separator ','\n\
         set title \"{title}\" noenhanced\n\
         set xlabel '{x}' noenhanced\n\
         set key left top noenhanced\n\
         plot '{data}' using 1:3 with lines title '{y}', '{data}' using 1:2 with lines title '{z}'\n",
        png = png.display(),
        title = h.quantity,
        x = h.columns[0],
        y = h.columns[2],
        z = h.columns[1],
    )
}

/// Writes a gnuplot script next to a CSV artifact.
pub fn emit_plot_script(artifact: &Path) -> Result<PlotOutcome> {
    if !artifact.exists() {
        bail!("artifact {} not found", artifact.display());
    }
    if artifact.extension().and_then(|e| e.to_str()) == Some("json") {
        return Ok(PlotOutcome::Skipped(format!(
            "{} is a JSON document; plot scripts are written for CSV grids and scans",
            artifact.display()
        )));
    }
    let h = read_header(artifact)?;
    let data = artifact.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let script = match h.experiment.as_str() {
        "fig1" | "fig2" | "chaotic-g2" => heatmap(&data, &h),
        "eps-scan" if h.columns.len() == 3 => line_plot(&data, &h),
        "props" => {
            return Ok(PlotOutcome::Skipped(
                "props reports hold pass/fail outcomes, not plottable data".into(),
            ))
        }
        other => bail!("{} is not a coherlab artifact (experiment {other:?})", artifact.display()),
    };
    let out = script_path(artifact);
    fs::write(&out, script).with_context(|| format!("writing {}", out.display()))?;
    Ok(PlotOutcome::Script(out))
}
