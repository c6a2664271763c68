//! Deterministic file emission: CSV with 17 significant digits, '.'
//! decimal separator, and LF line endings; JSON summaries with a fixed key
//! set; and gnuplot scripts for log-log error plots.  Identical inputs
//! must produce byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// `{:.16e}` carries 17 significant digits — enough to round-trip any f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fmt_bool(v: bool) -> String {
    if v { "true".into() } else { "false".into() }
}

/// Write a CSV file with LF line endings.
pub fn write_csv(
    dir: &Path,
    name: &str,
    header: &str,
    rows: &[Vec<String>],
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut out = String::with_capacity(rows.len() * 64 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(&path, out.as_bytes())?;
    Ok(path)
}

/// The fixed summary schema shared by `summary.json` and `rates.json`.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub command: String,
    pub seed: u64,
    pub pass_count: usize,
    pub fail_count: usize,
    /// Smallest `rhs - lhs` over all checked inequalities; negative means
    /// a violation.  `null` when the run checks no inequalities.
    pub worst_slack: Option<f64>,
    /// Fitted slopes / constants, when the run estimates any.
    pub slopes: Option<serde_json::Value>,
    /// Numerical guard values, when the run computes any.
    pub guards: Option<serde_json::Value>,
}

pub fn write_summary(dir: &Path, name: &str, summary: &RunSummary) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(summary)?;
    text.push('\n');
    std::fs::write(&path, text.as_bytes())?;
    Ok(path)
}

/// A gnuplot script plotting selected CSV columns against column 1 on
/// log-log axes.
pub fn write_plot_script(
    dir: &Path,
    name: &str,
    csv_name: &str,
    ylabel: &str,
    series: &[(usize, &str)],
) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    let stem = name.strip_suffix(".plt").unwrap_or(name);
    let mut f = std::fs::File::create(&path)?;
    writeln!(f, "set datafile separator ','")?;
    writeln!(f, "set logscale xy")?;
    writeln!(f, "set xlabel 'subspace dimension n'")?;
    writeln!(f, "set ylabel '{ylabel}'")?;
    writeln!(f, "set key top right")?;
    writeln!(f, "set terminal svg size 900,640")?;
    writeln!(f, "set output '{stem}.svg'")?;
    let mut parts = Vec::new();
    for (i, (col, label)) in series.iter().enumerate() {
        let source = if i == 0 { format!("'{csv_name}'") } else { "''".to_string() };
        parts.push(format!("{source} skip 1 using 1:{col} with linespoints title '{label}'"));
    }
    writeln!(f, "plot {}", parts.join(", \\\n     "))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_has_seventeen_significant_digits() {
        assert_eq!(fmt_float(2.0), "2.0000000000000000e0");
        assert_eq!(fmt_float(-0.5), "-5.0000000000000000e-1");
        let pi = std::f64::consts::PI;
        let text = fmt_float(pi);
        assert_eq!(text.parse::<f64>().unwrap(), pi, "format must round-trip");
    }

    #[test]
    fn csv_uses_lf_only() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![vec!["1".to_string(), fmt_float(0.25)]];
        let path = write_csv(dir.path(), "t.csv", "n,value", &rows).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert!(!bytes.contains(&b'\r'), "no carriage returns allowed");
        assert_eq!(
            String::from_utf8(bytes).unwrap(),
            "n,value\n1,2.5000000000000000e-1\n"
        );
    }

    #[test]
    fn summary_keys_are_stable() {
        let dir = tempfile::tempdir().unwrap();
        let summary = RunSummary {
            command: "check-inequalities".into(),
            seed: 7,
            pass_count: 3,
            fail_count: 0,
            worst_slack: Some(0.125),
            slopes: None,
            guards: None,
        };
        let path = write_summary(dir.path(), "summary.json", &summary).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let order: Vec<usize> = [
            "\"command\"",
            "\"seed\"",
            "\"pass_count\"",
            "\"fail_count\"",
            "\"worst_slack\"",
            "\"slopes\"",
            "\"guards\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap_or_else(|| panic!("missing key {k}")))
        .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]), "keys must keep declaration order");
        assert!(text.ends_with('\n'));
    }
}
