use std::fmt::Write as _;
use std::path::Path;

use super::report::RunReport;
use super::scenario::OutputFormat;
use crate::error::{Error, Result};

pub fn to_json(report: &RunReport) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Io(format!("json encoding: {e}")))
}

/// One row per (point, check) with the largest gated value at that point.
pub fn to_csv(report: &RunReport) -> Result<String> {
    let dim = report.points.first().map_or(0, |p| p.point.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string()];
    header.extend((0..dim).map(|k| format!("x{k}")));
    header.extend(["check".to_string(), "residual".to_string()]);
    let io = |e: csv::Error| Error::Io(format!("csv encoding: {e}"));
    w.write_record(&header).map_err(io)?;
    for (i, p) in report.points.iter().enumerate() {
        for c in &report.checks {
            let prefix = format!("{}.", c.check);
            let residual = p
                .residuals
                .iter()
                .filter(|(k, _)| k.strip_prefix(&prefix).is_some_and(|r| c.stats.contains_key(r)))
                .map(|(_, v)| *v)
                .reduce(f64::max);
            let mut row = vec![i.to_string()];
            row.extend(p.point.iter().map(|x| x.to_string()));
            row.push(c.check.clone());
            row.push(residual.map_or(String::new(), |r| r.to_string()));
            w.write_record(&row).map_err(io)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(format!("csv encoding: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

pub fn to_markdown(report: &RunReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# {}\n", report.scenario.name);
    let _ = writeln!(s, "Instance: {}\n", report.instance_label);
    let _ = writeln!(s, "| check | verdict | expected | max residual | tol |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for c in &report.checks {
        let worst = c
            .stats
            .iter()
            .filter(|(_, st)| st.count > 0)
            .map(|(k, st)| (st.max / c.tolerances[k], st.max, c.tolerances[k]))
            .max_by(|a, b| a.0.total_cmp(&b.0));
        let (max, tol) = worst.map_or(("-".into(), "-".into()), |(_, m, t)| (format!("{m:.3e}"), format!("{t:.1e}")));
        let _ = writeln!(s, "| {} | {:?} | {:?} | {max} | {tol} |", c.check, c.verdict, c.expected);
    }
    let _ = writeln!(s, "\nOverall: {:?}", report.overall);
    s
}

/// Write every output requested by the scenario. Relative paths resolve
/// against `dir`.
pub fn write_outputs(report: &RunReport, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    let mut written = Vec::new();
    for out in &report.scenario.outputs {
        let text = match out.format {
            OutputFormat::Json => to_json(report)?,
            OutputFormat::Csv => to_csv(report)?,
            OutputFormat::Md => to_markdown(report),
        };
        let path = dir.join(&out.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
        }
        std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}
