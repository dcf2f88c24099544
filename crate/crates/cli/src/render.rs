//! Plain-text tables for the `--format table` output.

use std::fmt::Write as _;

use brb_core::{InferenceResult, NodeOutput, NodeResult, RuleBase, ValidationIssue, WhatIfReport};

pub fn issues(issues: &[ValidationIssue], errors: usize) -> String {
    let mut out = String::new();
    for i in issues {
        let _ = writeln!(out, "{i}");
    }
    let _ = writeln!(out, "{errors} errors, {} warnings", issues.len() - errors);
    out
}

pub fn rules(rb: &RuleBase) -> String {
    let grades = rb.consequent_scale().grades();
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} rules", rb.name(), rb.rules().len());
    let _ = write!(out, "{:<8}", "id");
    for a in rb.antecedents() {
        let _ = write!(out, " {:<14}", a.name());
    }
    for g in grades {
        let _ = write!(out, " {g:>12}");
    }
    out.push('\n');
    for r in rb.rules() {
        let _ = write!(out, "{:<8}", r.id);
        for (a, &g) in rb.antecedents().iter().zip(&r.antecedent) {
            let _ = write!(out, " {:<14}", a.scale().grades()[g]);
        }
        for b in r.consequent.degrees() {
            let _ = write!(out, " {b:>12.4}");
        }
        out.push('\n');
    }
    out
}

pub fn inference(name: &str, result: &InferenceResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{name}");
    for (g, b) in result.grades.iter().zip(result.distribution.degrees()) {
        let _ = writeln!(out, "  {g:<14} {b:.4}");
    }
    let _ = writeln!(out, "  {:<14} {:.4}", "unassigned", result.unassigned_mass);
    let _ = writeln!(out, "  {:<14} {:.4} ({:.2}%)", "crisp", result.crisp, result.crisp * 10.0);
    out
}

/// One line per node, children indented under their parent.
pub fn tree(result: &NodeResult) -> String {
    let mut out = String::new();
    let grades = match &result.output {
        NodeOutput::Internal { result, .. } => result.grades.clone(),
        NodeOutput::Leaf { .. } => vec![],
    };
    let _ = write!(out, "{:<40} {:>8} {:>8}", "node", "score", "percent");
    for g in &grades {
        let _ = write!(out, " {:>9}", abbreviate(g));
    }
    let _ = writeln!(out, " {:>9}", "unknown");
    walk(result, 0, &mut out);
    out
}

fn abbreviate(grade: &str) -> String {
    grade.chars().take(9).collect()
}

fn walk(node: &NodeResult, depth: usize, out: &mut String) {
    let name = format!("{}{}", "  ".repeat(depth), node.name);
    match &node.output {
        NodeOutput::Internal { result, percent } => {
            let _ = write!(out, "{name:<40} {:>8.4} {:>7.2}%", result.crisp, percent);
        }
        NodeOutput::Leaf { input, .. } => {
            let _ = write!(out, "{name:<40} {:>8} {:>8}", input.to_string(), "");
        }
    }
    let dist = node.distribution();
    for b in dist.degrees() {
        let _ = write!(out, " {b:>9.4}");
    }
    let _ = writeln!(out, " {:>9.4}", dist.unassigned());
    for child in &node.children {
        walk(child, depth + 1, out);
    }
}

pub fn what_if(report: &WhatIfReport) -> String {
    let mut out = String::new();
    let base = report.baseline.crisp().unwrap_or(f64::NAN);
    let _ = writeln!(out, "baseline {}: {base:.4}", report.baseline.name);
    if report.scenarios.is_empty() {
        return out;
    }
    let _ = writeln!(out, "{:<24} {:>10} {:>10}", "scenario", "root", "delta");
    for s in &report.scenarios {
        match (&s.error, s.root_delta) {
            (Some(e), _) => {
                let _ = writeln!(out, "{:<24} error: {e}", s.name);
            }
            (None, Some(d)) => {
                let _ = writeln!(out, "{:<24} {:>10.4} {:>+10.4}", s.name, base + d, d);
            }
            (None, None) => {
                let _ = writeln!(out, "{:<24}", s.name);
            }
        }
    }
    for s in report.scenarios.iter().filter(|s| s.error.is_none()) {
        let _ = writeln!(out, "\n{}", s.name);
        for d in &s.deltas {
            let _ = writeln!(out, "  {:<38} {:>8.4} -> {:>8.4} {:>+9.4}", d.node, d.baseline, d.scenario, d.delta);
        }
    }
    out
}
