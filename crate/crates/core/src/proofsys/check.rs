use std::collections::BTreeMap;

use crate::design::{classify, equiv, substitute_unchecked, DefSystem, Design, Polarity, Var};
use crate::normalize::{normal_form, NormalForm};

use super::{next_rule_in, Derivation, Rule, SearchMode, Sequent, Step};

/// A node that does not match its rule; `path` lists premise indices from
/// the root.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("at node {path:?}: {message}")]
pub struct CheckError {
    pub path: Vec<usize>,
    pub message: String,
}

/// Checks every node of a cut-free derivation against the rule schemas.
pub fn check_derivation(d: &Derivation, defs: &DefSystem) -> Result<(), CheckError> {
    Checker { defs, cuts: false, mode: SearchMode::Shared }.node(d, &mut Vec::new())
}

/// The normal form of a derivation's subject, with its classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCheck {
    pub normal_form: NormalForm,
    /// Whether the normal form is a proof; `None` if it is incomplete.
    pub is_proof: Option<bool>,
}

/// Checks a derivation that may use the cut rule, and computes the normal
/// form of its conclusion's subject.
pub fn check_cut_derivation(d: &Derivation, defs: &DefSystem, fuel: usize, depth: usize) -> Result<CutCheck, CheckError> {
    Checker { defs, cuts: true, mode: SearchMode::Shared }.node(d, &mut Vec::new())?;
    let nf = normal_form(&d.sequent.subject, defs, fuel, depth);
    let is_proof = nf.to_design().map(|x| x.is_omega() || classify(&x, defs).is_proof);
    Ok(CutCheck { normal_form: nf, is_proof })
}

struct Checker<'a> {
    defs: &'a DefSystem,
    cuts: bool,
    mode: SearchMode,
}

fn fail<T>(path: &[usize], message: impl Into<String>) -> Result<T, CheckError> {
    Err(CheckError { path: path.to_vec(), message: message.into() })
}

impl Checker<'_> {
    fn node(&self, d: &Derivation, path: &mut Vec<usize>) -> Result<(), CheckError> {
        if let Err(e) = d.sequent.validate(self.defs) {
            return fail(path, e.to_string());
        }
        match &d.rule {
            Rule::Cut { var, lemma } => self.cut(d, var, lemma, path)?,
            rule => {
                let step = match next_rule_in(&d.sequent, self.defs, self.mode) {
                    Ok(s) => s,
                    Err(e) => return fail(path, e.to_string()),
                };
                let Step::Apply { rule: expected, premises } = step else {
                    return fail(path, "no rule applies");
                };
                if *rule != expected {
                    return fail(path, "rule does not match the sequent");
                }
                if premises.len() != d.premises.len() {
                    return fail(path, format!("expected {} premises, found {}", premises.len(), d.premises.len()));
                }
                for (k, (want, got)) in premises.iter().zip(&d.premises).enumerate() {
                    if !same_sequent(want, &got.sequent, self.defs) {
                        path.push(k);
                        let r = fail(path, "premise does not match");
                        path.pop();
                        return r;
                    }
                }
            }
        }
        for (k, q) in d.premises.iter().enumerate() {
            path.push(k);
            self.node(q, path)?;
            path.pop();
        }
        Ok(())
    }

    fn cut(&self, d: &Derivation, z: &Var, lemma: &crate::Behaviour, path: &[usize]) -> Result<(), CheckError> {
        if !self.cuts {
            return fail(path, "cut rule outside cut-checking mode");
        }
        if lemma.polarity() != Polarity::Positive {
            return fail(path, "cut lemma must be a positive behaviour");
        }
        let [left, right] = d.premises.as_slice() else {
            return fail(path, "the cut rule has two premises");
        };
        let (l, r, c) = (&left.sequent, &right.sequent, &d.sequent);
        if l.ctx.lookup(z) != Some(lemma) {
            return fail(path, format!("left premise lacks `{z}` of the lemma"));
        }
        if r.ctx.neg.as_ref() != Some(&lemma.dual()) {
            return fail(path, "right premise must end with the dual of the lemma");
        }
        let rest: Vec<_> = l.ctx.pos.iter().filter(|(v, _)| v != z).cloned().collect();
        if rest != c.ctx.pos || l.ctx.neg != c.ctx.neg {
            return fail(path, "conclusion context must be the left context without the cut variable");
        }
        if !r.ctx.pos.iter().all(|e| c.ctx.pos.contains(e)) {
            return fail(path, "right context must be included in the conclusion");
        }
        let bound = substitute_unchecked(&l.subject, &BTreeMap::from([(z.clone(), r.subject.clone())]), self.defs);
        if !equiv(&bound, &c.subject, self.defs) {
            return fail(path, "conclusion subject is not the substitution instance");
        }
        Ok(())
    }
}

/// Same sequent up to a positional renaming of the context variables.
fn same_sequent(a: &Sequent, b: &Sequent, defs: &DefSystem) -> bool {
    if a.ctx.neg != b.ctx.neg || a.ctx.pos.len() != b.ctx.pos.len() {
        return false;
    }
    let mut map = BTreeMap::new();
    for ((va, ba), (vb, bb)) in a.ctx.pos.iter().zip(&b.ctx.pos) {
        if ba != bb {
            return false;
        }
        if va != vb {
            map.insert(vb.clone(), Design::Var(va.clone()));
        }
    }
    let renamed = substitute_unchecked(&b.subject, &map, defs);
    equiv(&a.subject, &renamed, defs)
}
