use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::diagnostics::{CheckStatus, InvariantReport};
use crate::error::Result;
use crate::mmio::fmt_f64;
use crate::solver::SolveReport;

/// Renders the run report as JSON with a fixed key order:
///
/// ```text
/// n, iterations, stop_reason, residual_norms, alphas, betas, tol_rel
/// [, invariants: array of {name, violation, threshold, pass}]
/// ```
///
/// Numbers are written with 17 significant digits, so parsing the output
/// and re-rendering it reproduces the bytes exactly.
pub fn render_report(report: &SolveReport, invariants: Option<&InvariantReport>) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"n\": {},\n", report.x.len()));
    out.push_str(&format!("  \"iterations\": {},\n", report.iterations));
    out.push_str(&format!(
        "  \"stop_reason\": \"{}\",\n",
        report.stop_reason.label()
    ));
    out.push_str(&format!(
        "  \"residual_norms\": {},\n",
        number_array(&report.residual_norms)
    ));
    out.push_str(&format!("  \"alphas\": {},\n", number_array(&report.alphas)));
    out.push_str(&format!("  \"betas\": {},\n", number_array(&report.betas)));
    out.push_str(&format!("  \"tol_rel\": {}", fmt_f64(report.tol_rel)));
    if let Some(inv) = invariants {
        out.push_str(",\n  \"invariants\": [\n");
        for (k, entry) in inv.entries.iter().enumerate() {
            out.push_str(&format!(
                "    {{\"name\": \"{}\", \"violation\": {}, \"threshold\": {}, \"pass\": {}}}{}\n",
                entry.name,
                fmt_f64(entry.violation),
                fmt_f64(entry.threshold),
                entry.status != CheckStatus::Fail,
                if k + 1 < inv.entries.len() { "," } else { "" }
            ));
        }
        out.push_str("  ]\n");
    } else {
        out.push('\n');
    }
    out.push_str("}\n");
    out
}

/// Writes the JSON report to a file.
pub fn write_report(
    report: &SolveReport,
    invariants: Option<&InvariantReport>,
    path: &Path,
) -> Result<()> {
    let file = File::create(path)?;
    let mut out = BufWriter::new(file);
    out.write_all(render_report(report, invariants).as_bytes())?;
    out.flush()?;
    Ok(())
}

fn number_array(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
    format!("[{}]", items.join(", "))
}
