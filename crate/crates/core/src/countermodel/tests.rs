use super::*;
use crate::proofsys::parse_sequent;

fn run(text: &str) -> (Sequent, SearchBranch, ModelAssignment) {
    let (s, defs) = parse_sequent(text).unwrap();
    let (b, m) = countermodel(&s, &defs, 1000).unwrap();
    (s, b, m)
}

#[test]
fn stuck_name_saturates() {
    let (s, _, m) = run("x0 | b |- x0: one");
    assert_eq!(m.kind, ModelKind::Exact);
    assert_eq!(m.model(&Var::x0()).unwrap().to_string(), "{ * => daimon }");
    let r = verify_defeat(&s, &m, 100).unwrap();
    assert_eq!(r.verdict(), Verdict::Omega);
    let mem = verify_countermodel_membership(&s, &m, 100, 10).unwrap();
    assert!(mem.all_pass());
}

#[test]
fn stuck_omega_inside() {
    let (s, b, m) = run("x0 | down<{}> |- x0: down(up(one))");
    assert_eq!(b.end, BranchEnd::StuckOmega);
    assert!(m.is_finite());
    assert_eq!(verify_defeat(&s, &m, 100).unwrap().verdict(), Verdict::Omega);
    assert!(verify_countermodel_membership(&s, &m, 100, 10).unwrap().all_pass());
}

#[test]
fn periodic_branch() {
    let (s, _, m) = run("def inf(x) = x | down<{ up(y) => inf(x) }>\ninf(x0) |- x0: down(up(one))");
    assert!(matches!(m.kind, ModelKind::Periodic { start: 0, length: 1 }));
    let r = verify_defeat(&s, &m, 100).unwrap();
    assert_eq!(r.verdict(), Verdict::Omega);
    assert!(is_cycle(&r));
    assert!(verify_countermodel_membership(&s, &m, 100, 10).unwrap().all_pass());
}

#[test]
fn negative_root_uses_test() {
    let (s, _, m) = run("{ pi1(x) => x | *; pi2(y) => y | b } |- with(one, one)");
    let q = m.test.as_ref().unwrap();
    assert!(q.to_string().contains("pi2"));
    assert_eq!(verify_defeat(&s, &m, 100).unwrap().verdict(), Verdict::Omega);
    assert!(verify_countermodel_membership(&s, &m, 100, 10).unwrap().all_pass());
}

#[test]
fn two_variables() {
    let (s, _, m) = run("x | down<{ up(y) => z | b }> |- x: down(up(one)), z: one");
    assert_eq!(m.models.len(), 2);
    assert_eq!(verify_defeat(&s, &m, 100).unwrap().verdict(), Verdict::Omega);
    assert!(verify_countermodel_membership(&s, &m, 100, 10).unwrap().all_pass());
}

#[test]
fn approximants_grow() {
    let (s, defs) = parse_sequent("def inf(x) = x | down<{ up(y) => inf(x) }>\ninf(x0) |- x0: down(up(one))").unwrap();
    let sizes: Vec<usize> = (1..5).map(|k| approximant(&s, &defs, k).unwrap().model(&Var::x0()).unwrap().size()).collect();
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]), "{sizes:?}");
    let m = approximant(&s, &defs, 2).unwrap();
    assert!(m.is_finite());
    assert!(matches!(m.kind, ModelKind::Approximant { .. }));
    assert_eq!(verify_defeat(&s, &m, 100).unwrap().verdict(), Verdict::Omega);
}

#[test]
fn derivable_has_none() {
    let (s, defs) = parse_sequent("x0 | * |- x0: one").unwrap();
    assert_eq!(countermodel(&s, &defs, 10).unwrap_err(), CountermodelError::Derived);
}

#[test]
fn report_lines() {
    let (s, b, m) = run("x0 | b |- x0: one");
    let d = verify_defeat(&s, &m, 100).unwrap();
    let text = render_report(&s, &b, &m, &d, None);
    assert!(text.contains("model.x0: { * => daimon }"));
    assert!(render_model(&m).starts_with("M(x0) = "));
}
