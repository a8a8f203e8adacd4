use crate::behaviour::BehaviourPrinter;
use crate::design::Printer;

use super::{BranchEnd, Derivation, Rule, SearchBranch, Sequent};

pub(crate) struct Printers {
    pub designs: Printer,
    pub behaviours: BehaviourPrinter,
}

impl Printers {
    pub fn new() -> Printers {
        Printers { designs: Printer::new(), behaviours: BehaviourPrinter::new() }
    }
}

pub(crate) fn sequent_line(s: &Sequent, p: &mut Printers) -> String {
    let subject = p.designs.design(&s.subject);
    let mut parts: Vec<String> = s
        .ctx
        .pos
        .iter()
        .map(|(v, b)| format!("{}: {}", p.designs.var(v), p.behaviours.behaviour(b)))
        .collect();
    if let Some(n) = &s.ctx.neg {
        parts.push(p.behaviours.behaviour(n));
    }
    if parts.is_empty() {
        format!("{subject} |-")
    } else {
        format!("{subject} |- {}", parts.join(", "))
    }
}

fn rule_tag(r: &Rule, p: &mut Printers) -> String {
    match r {
        Rule::Positive { var, behaviour, action } => {
            let name = if action.as_str() == "up" { "down".to_string() } else { action.to_string() };
            format!("({}, {name}) on {}", p.behaviours.connective_name(behaviour), p.designs.var(var))
        }
        Rule::Negative { behaviour } => format!("({})", p.behaviours.connective_name(behaviour)),
        Rule::Cut { var, lemma } => format!("cut on {}: {}", p.designs.var(var), p.behaviours.behaviour(lemma)),
    }
}

/// One line per node, premises indented by two spaces under their
/// conclusion, in premise order: `SEQUENT   [RULE]`. Declarations of
/// non-library connectives come first.
pub(crate) fn render_derivation(d: &Derivation) -> String {
    let mut p = Printers::new();
    let mut body = String::new();
    write_node(d, 0, &mut p, &mut body);
    format!("{}{body}", p.behaviours.declarations())
}

/// One line per step, `SEQUENT   [RULE] -> premise k`, then the last
/// sequent and how the branch ends.
pub fn render_branch(b: &SearchBranch) -> String {
    let mut p = Printers::new();
    let mut body = String::new();
    for (i, step) in b.steps.iter().enumerate() {
        let line = sequent_line(&step.sequent, &mut p);
        let tag = rule_tag(&step.rule, &mut p);
        body.push_str(&format!("{i}: {line}   [{tag}] -> premise {}\n", step.premise));
    }
    let line = sequent_line(&b.last, &mut p);
    let end = match &b.end {
        BranchEnd::StuckOmega => "stuck: omega".to_string(),
        BranchEnd::StuckName { var, name, behaviour } => format!(
            "stuck: `{name}` is not an action of {} on {}",
            p.behaviours.connective_name(behaviour),
            p.designs.var(var)
        ),
        BranchEnd::Truncated => "truncated: fuel or depth exhausted".to_string(),
        BranchEnd::Periodic { start, renaming } => {
            let pairs: Vec<String> = renaming.iter().map(|(a, b)| format!("{a} -> {b}")).collect();
            format!("periodic: repeats step {start} under {{{}}}", pairs.join(", "))
        }
    };
    body.push_str(&format!("{}: {line}\n{end}\n", b.steps.len()));
    format!("{}{body}", p.behaviours.declarations())
}

fn write_node(d: &Derivation, depth: usize, p: &mut Printers, out: &mut String) {
    let line = sequent_line(&d.sequent, p);
    let tag = rule_tag(&d.rule, p);
    out.push_str(&"  ".repeat(depth));
    out.push_str(&line);
    out.push_str("   [");
    out.push_str(&tag);
    out.push_str("]\n");
    for q in &d.premises {
        write_node(q, depth + 1, p, out);
    }
}
