use std::fmt::Write;

use crate::design::{render_defs, Design};
use crate::proofsys::{BranchEnd, SearchBranch, Sequent};

use super::{DefeatReport, MembershipReport, ModelAssignment, ModelKind};

/// `M(x) = design` per context variable, the test design if any, then the
/// definitions they use.
pub fn render_model(m: &ModelAssignment) -> String {
    let mut out = String::new();
    for (x, d) in &m.models {
        let _ = writeln!(out, "M({x}) = {d}");
    }
    if let Some(q) = &m.test {
        let _ = writeln!(out, "test = {q}");
    }
    let roots: Vec<&Design> = m.models.iter().map(|(_, d)| d).chain(m.test.iter()).collect();
    out.push_str(&render_defs(&m.defs, &roots));
    out
}

fn end_text(b: &SearchBranch) -> String {
    match &b.end {
        BranchEnd::StuckOmega => "stuck on omega".into(),
        BranchEnd::StuckName { var, name, .. } => format!("stuck: no rule for `{name}` on {var}"),
        BranchEnd::Truncated => "truncated".into(),
        BranchEnd::Periodic { start, .. } => format!("periodic, repeats step {start}"),
    }
}

/// `key: value` lines describing the branch, the model and its checks.
pub fn render_report(
    s: &Sequent,
    branch: &SearchBranch,
    m: &ModelAssignment,
    defeat: &DefeatReport,
    membership: Option<&MembershipReport>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "sequent: {s}");
    let _ = writeln!(out, "branch_length: {}", branch.steps.len());
    let _ = writeln!(out, "branch_end: {}", end_text(branch));
    let kind = match m.kind {
        ModelKind::Exact => "exact".to_string(),
        ModelKind::Periodic { start, length } => format!("periodic (start {start}, period {length})"),
        ModelKind::Approximant { k } => format!("approximant (level {k})"),
    };
    let _ = writeln!(out, "model_kind: {kind}");
    for (x, d) in &m.models {
        let _ = writeln!(out, "model.{x}: {d}");
    }
    if let Some(q) = &m.test {
        let _ = writeln!(out, "test: {q}");
    }
    let roots: Vec<&Design> = m.models.iter().map(|(_, d)| d).chain(m.test.iter()).collect();
    for line in render_defs(&m.defs, &roots).lines() {
        let _ = writeln!(out, "definition: {line}");
    }
    let _ = writeln!(out, "defeat: {defeat}");
    if let Some(r) = membership {
        for e in &r.entries {
            let shape = match e.shape {
                Some(true) => "holds",
                Some(false) => "fails",
                None => "not checked",
            };
            let _ = writeln!(
                out,
                "membership.{}: {} ({} tests, shape {shape})",
                e.var,
                if e.passed() { "pass" } else { "fail" },
                e.tested
            );
            if let Some((d, o)) = &e.failure {
                let _ = writeln!(out, "membership.{}.failure: {d} gives {o}", e.var);
            }
        }
        let _ = writeln!(out, "membership: {}", if r.all_pass() { "pass" } else { "fail" });
    }
    out
}
