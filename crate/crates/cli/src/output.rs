//! CSV and gnuplot-script writers. Numeric cells use Rust's shortest
//! round-trip scientific formatting, so identical inputs always produce
//! byte-identical files.

use anyhow::{Context, Result};
use std::path::Path;

pub fn fmt_num(x: f64) -> String {
    format!("{x:e}")
}

/// Write a CSV with a `#`-prefixed metadata block followed by a header row.
/// Cells are pre-formatted strings, so label columns pass through untouched.
pub fn write_csv(
    path: &Path,
    meta: &[(String, String)],
    header: &[String],
    rows: &[Vec<String>],
) -> Result<()> {
    let mut out = String::new();
    for (k, v) in meta {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn write_text(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Line-plot script: y columns against column 1 of the CSV.
pub fn line_plot_script(csv_name: &str, x_label: &str, y_label: &str, y_cols: &[usize]) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator comma\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{x_label}'\n"));
    s.push_str(&format!("set ylabel '{y_label}'\n"));
    let plots: Vec<String> = y_cols
        .iter()
        .map(|col| format!("'{csv_name}' using 1:{col} with lines"))
        .collect();
    s.push_str(&format!("plot {}\n", plots.join(", \\\n     ")));
    s
}

/// Phase-space panel script for long-format Q data
/// (columns snapshot,re,im,q): one panel per snapshot label.
pub fn q_panel_script(csv_name: &str, labels: &[String]) -> String {
    let cols = labels.len().clamp(1, 2);
    let rows = labels.len().div_ceil(cols);
    let mut s = String::new();
    s.push_str("set datafile separator comma\n");
    s.push_str("set view map\nset size square\nunset key\n");
    s.push_str(&format!("set multiplot layout {rows},{cols}\n"));
    for label in labels {
        s.push_str(&format!("set title '{label}'\n"));
        s.push_str(&format!(
            "splot '{csv_name}' using 2:3:(strcol(1) eq '{label}' ? $4 : NaN) \
             with points pt 5 ps 0.5 palette\n"
        ));
    }
    s.push_str("unset multiplot\n");
    s
}
