use std::fmt::Write as _;

use super::report::*;
use super::{Format, RunError};

pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>, RunError> {
    Ok(match format {
        Format::Json => render_json(report).into_bytes(),
        Format::Text => render_text(report).into_bytes(),
        Format::Csv => render_csv(report)?.into_bytes(),
    })
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn set(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", inner.join(", "))
}

pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", if report.scenario.is_empty() { "(unnamed)" } else { &report.scenario });
    let _ = writeln!(out, "kmsflow {} (report schema {})", report.tool_version, report.schema_version);
    let _ = writeln!(out, "tolerances: rank {:e}, acceptance {:e}", report.tolerances.rank, report.tolerances.acceptance);
    for t in &report.tasks {
        let status = match t.status {
            TaskStatus::Ok => "ok",
            TaskStatus::Failed => "FAILED",
        };
        let _ = writeln!(out, "[{}] {}: {}", t.index, t.kind, status);
        if let Some(e) = &t.error {
            let _ = writeln!(out, "    {} (exit {})", e.message, e.code);
        }
        match &t.result {
            None => {}
            Some(TaskResult::Sectors(r)) => {
                for s in &r.states {
                    let parts: Vec<String> = s.components.iter().map(|c| format!("{}:{:.6}", c.label, c.weight)).collect();
                    let _ = writeln!(
                        out,
                        "    {}: {} sector(s) [{}], reassembly error {:.3e}",
                        s.state,
                        s.components.len(),
                        parts.join(", "),
                        s.reassembly_error
                    );
                }
                for p in &r.pairs {
                    let rel = if p.disjoint {
                        "disjoint"
                    } else if p.quasi_equivalent {
                        "quasi-equivalent"
                    } else {
                        "overlapping"
                    };
                    let _ = writeln!(out, "    {} vs {}: {}", p.state_1, p.state_2, rel);
                }
            }
            Some(TaskResult::Ssb(r)) => {
                let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
                let _ = writeln!(out, "    breaking verdict: {}", verdict.as_str().unwrap_or_default());
                let orbits: Vec<String> = r.orbits.iter().map(|o| set(o)).collect();
                let _ = writeln!(out, "    group {} on {} central point(s), orbits {}", r.group, r.central_points, orbits.join(" "));
                let _ = writeln!(out, "    unbroken subgroup {} with {} coset(s)", set(&r.unbroken_subgroup), r.cosets);
                match &r.induced.augmented_centre {
                    Some(c) => {
                        let _ = writeln!(out, "    augmented centre dimension {} (π̄: {})", c.hat_centre_dim, c.bar_centre_dim);
                    }
                    None => {
                        let _ = writeln!(out, "    augmented centre not computed: state is not factorial");
                    }
                }
            }
            Some(TaskResult::Kmscheck(r)) => {
                for row in &r.rows {
                    let _ = writeln!(
                        out,
                        "    β = {}: defect {:.3e} ({})",
                        row.beta,
                        row.defect,
                        if row.within_tolerance { "KMS" } else { "not KMS" }
                    );
                }
            }
            Some(TaskResult::Scaleflow(r)) => {
                for row in &r.rows {
                    let _ = writeln!(out, "    λ = {}: β {} -> {}, defect {:.3e}", row.lambda, row.beta_in, row.beta_out, row.kms_defect);
                }
            }
            Some(TaskResult::Divergence(r)) => {
                for row in &r.rows {
                    let _ = writeln!(out, "    D(p = {}) [{} || {}] = {:.9}", row.p, row.state_1, row.state_2, row.divergence);
                }
            }
        }
    }
    out
}

pub const FLOW_HEADER: [&str; 4] = ["lambda", "beta_in", "beta_out", "kms_defect"];
pub const DIVERGENCE_HEADER: [&str; 6] = ["state_1", "state_2", "p", "q", "alpha", "divergence"];

/// Flow tables, then divergence tables, separated by blank lines.
pub fn render_csv(report: &Report) -> Result<String, RunError> {
    let mut tables = Vec::new();
    let io = |e: csv::Error| RunError::Io(e.to_string());
    for f in report.flow_tables() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(FLOW_HEADER).map_err(io)?;
        for r in &f.rows {
            w.write_record([r.lambda.to_string(), r.beta_in.to_string(), r.beta_out.to_string(), format!("{:.6e}", r.kms_defect)])
                .map_err(io)?;
        }
        tables.push(w.into_inner().map_err(|e| RunError::Io(e.to_string()))?);
    }
    for d in report.divergence_tables() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(DIVERGENCE_HEADER).map_err(io)?;
        for r in &d.rows {
            w.write_record([
                r.state_1.clone(),
                r.state_2.clone(),
                r.p.to_string(),
                r.q.to_string(),
                r.alpha.to_string(),
                format!("{:.12e}", r.divergence),
            ])
            .map_err(io)?;
        }
        tables.push(w.into_inner().map_err(|e| RunError::Io(e.to_string()))?);
    }
    let text: Vec<String> = tables.into_iter().map(|t| String::from_utf8(t).expect("utf-8 csv")).collect();
    Ok(text.join("\n"))
}
