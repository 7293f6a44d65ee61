//! Aggregate run records into a human-readable summary with per-suite
//! rollups, links to the CSV evidence and optional SVG decay plots.

use std::path::{Path, PathBuf};

use crate::record::RunRecord;
use crate::svg::log_log_plot;

/// Render a markdown summary; when `plots` is set, decay curves are
/// written as SVG files next to the summary and referenced from it.
pub fn render_summary(
    records: &[(PathBuf, RunRecord)],
    out_dir: &Path,
    plots: bool,
) -> anyhow::Result<String> {
    let mut out = String::from("# Verification summary\n\n");
    let total: usize = records.iter().map(|(_, r)| r.suites.len()).sum();
    let passed: usize = records
        .iter()
        .map(|(_, r)| r.suites.iter().filter(|s| s.pass).count())
        .sum();
    out.push_str(&format!(
        "{passed}/{total} suites passing over {} record(s).\n\n",
        records.len()
    ));
    out.push_str("| record | suite | checks | failed | status | evidence |\n");
    out.push_str("|---|---|---:|---:|---|---|\n");
    for (path, record) in records {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        for suite in &record.suites {
            let failed = suite.checks.iter().filter(|c| !c.pass).count();
            out.push_str(&format!(
                "| {} | {} | {} | {} | {} | {} |\n",
                path.display(),
                suite.name,
                suite.checks.len(),
                failed,
                if suite.pass { "pass" } else { "FAIL" },
                dir.join(format!("{}.csv", suite.name)).display(),
            ));
        }
    }
    if plots {
        out.push_str("\n## Decay plots\n\n");
        std::fs::create_dir_all(out_dir)?;
        for (path, record) in records {
            for suite in &record.suites {
                if suite.curves.is_empty() {
                    continue;
                }
                let stem = path
                    .parent()
                    .and_then(|p| p.file_name())
                    .map(|s| s.to_string_lossy().to_string())
                    .unwrap_or_else(|| "record".into());
                let name = format!("{stem}-{}.svg", suite.name);
                let svg = log_log_plot(&format!("{} decay", suite.name), &suite.curves);
                std::fs::write(out_dir.join(&name), svg)?;
                out.push_str(&format!("![{}]({})\n", suite.name, name));
            }
        }
    }
    Ok(out)
}
