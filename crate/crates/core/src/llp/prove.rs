use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::behaviour::{Behaviour, Context};
use crate::design::{Branch, DefSystem, Design, Polarity, Var};
use crate::proofsys::{prove, ProofResult, Sequent};

use super::{bullet, formulas_up_to, parse_llp_list, Formula, LlpError, Node};

/// `|- ?P1, .., ?Pn, D`; `gamma` holds the `Pi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StrictSequent {
    pub gamma: Vec<Formula>,
    pub d: Option<Formula>,
}

impl StrictSequent {
    /// Every `?`-formula goes to `gamma`; at most one other formula is
    /// allowed.
    pub fn from_formulas(fs: Vec<Formula>) -> Result<StrictSequent, LlpError> {
        let mut gamma = Vec::new();
        let mut d: Option<Formula> = None;
        for f in fs {
            match f.as_quest() {
                Some(p) => gamma.push(p.clone()),
                None => {
                    if let Some(prev) = &d {
                        return Err(LlpError::NotStrict(format!("both `{prev}` and `{f}` lack `?`")));
                    }
                    d = Some(f);
                }
            }
        }
        Ok(StrictSequent { gamma, d })
    }

    pub fn parse(text: &str) -> Result<StrictSequent, LlpError> {
        StrictSequent::from_formulas(parse_llp_list(text)?)
    }

    pub fn formulas(&self) -> Vec<Formula> {
        self.gamma.iter().map(|p| Formula::shift(p.clone())).chain(self.d.iter().cloned()).collect()
    }

    /// The translated context, and the variable of a positive `D`.
    pub fn to_ludics(&self) -> Result<(Context, Option<Var>), LlpError> {
        let mut ctx = Context::new();
        for (i, p) in self.gamma.iter().enumerate() {
            ctx.pos.push((Var::new(&format!("g{}", i + 1)), bullet(p)?));
        }
        let mut focus = None;
        if let Some(d) = &self.d {
            let b = bullet(d)?;
            match d.polarity() {
                Polarity::Negative => ctx.neg = Some(b),
                Polarity::Positive => {
                    let v = Var::new("d");
                    ctx.pos.push((v.clone(), b));
                    focus = Some(v);
                }
            }
        }
        Ok((ctx, focus))
    }
}

impl fmt::Display for StrictSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.formulas().iter().map(|x| x.to_string()).collect();
        if parts.is_empty() {
            f.write_str("|-")
        } else {
            write!(f, "|- {}", parts.join(", "))
        }
    }
}

/// Outcome of proving through the ludics proof system.
#[derive(Debug, Clone)]
pub struct LlpProof {
    /// Derivable, not derivable, or undetermined within the fuel.
    pub verdict: Option<bool>,
    /// The translated sequent with the reconstructed proof as subject.
    pub sequent: Option<Sequent>,
    pub visited: usize,
}

/// Proves a strict sequent by translation: the proof design is found by
/// search over the rules of the translated sequent, then checked by the
/// ludics proof search. A positive `D` is the focus of the last rule and
/// does not remain in the premises.
pub fn prove_llp(s: &StrictSequent, fuel: usize) -> Result<LlpProof, LlpError> {
    let (ctx, focus) = s.to_ludics()?;
    let mut search = LSearch { fuel, visited: 0, fresh: 0, ancestors: HashSet::new() };
    let found = match (&ctx.neg, &focus) {
        (Some(n), _) => search.negative(&ctx.pos, n),
        (None, Some(v)) => {
            let rest: Vec<(Var, Behaviour)> = ctx.pos.iter().filter(|(w, _)| w != v).cloned().collect();
            let b = ctx.lookup(v).expect("focus is in the context").clone();
            search.focus(v, &b, &rest)
        }
        (None, None) => search.positive(&ctx.pos),
    };
    let visited = search.visited;
    match found {
        Found::Yes(subject) => {
            let seq = Sequent::new(subject, ctx);
            let checked = prove(&seq, &DefSystem::new(), fuel.max(1000))
                .map_err(|e| LlpError::Translation(format!("reconstructed proof rejected: {e}")))?;
            if !matches!(checked, ProofResult::Derived(_)) {
                return Err(LlpError::Translation("reconstructed proof does not derive the sequent".into()));
            }
            Ok(LlpProof { verdict: Some(true), sequent: Some(seq), visited })
        }
        Found::No => Ok(LlpProof { verdict: Some(false), sequent: None, visited }),
        Found::Fuel => Ok(LlpProof { verdict: None, sequent: None, visited }),
    }
}

enum Found {
    Yes(Design),
    No,
    Fuel,
}

struct LSearch {
    fuel: usize,
    visited: usize,
    fresh: usize,
    ancestors: HashSet<String>,
}

fn state_key(ctx: &[(Var, Behaviour)], neg: Option<&Behaviour>) -> String {
    let keys: BTreeSet<&str> = ctx.iter().map(|(_, b)| b.key()).collect();
    let mut k = keys.into_iter().collect::<Vec<_>>().join(",");
    if let Some(n) = neg {
        k.push('|');
        k.push_str(n.key());
    }
    k
}

impl LSearch {
    fn enter(&mut self, key: &str) -> Option<Found> {
        if self.ancestors.contains(key) {
            return Some(Found::No);
        }
        if self.visited >= self.fuel {
            return Some(Found::Fuel);
        }
        self.visited += 1;
        None
    }

    fn positive(&mut self, ctx: &[(Var, Behaviour)]) -> Found {
        let key = state_key(ctx, None);
        if let Some(f) = self.enter(&key) {
            return f;
        }
        self.ancestors.insert(key.clone());
        let mut seen = BTreeSet::new();
        let mut out = Found::No;
        for (z, b) in ctx {
            if !seen.insert(b.key()) {
                continue;
            }
            match self.focus(z, b, ctx) {
                Found::Yes(d) => {
                    out = Found::Yes(d);
                    break;
                }
                Found::Fuel => out = Found::Fuel,
                Found::No => {}
            }
        }
        self.ancestors.remove(&key);
        out
    }

    /// The positive rules on `z: b` with premises over `ctx`.
    fn focus(&mut self, z: &Var, b: &Behaviour, ctx: &[(Var, Behaviour)]) -> Found {
        let mut out = Found::No;
        'actions: for a in b.connective().actions() {
            let mut args = Vec::new();
            for x in &a.vars {
                match self.negative(ctx, b.arg_for(x)) {
                    Found::Yes(d) => args.push(d),
                    Found::Fuel => {
                        out = Found::Fuel;
                        continue 'actions;
                    }
                    Found::No => continue 'actions,
                }
            }
            return Found::Yes(Design::pred(Design::Var(z.clone()), a.name.clone(), args));
        }
        out
    }

    fn negative(&mut self, ctx: &[(Var, Behaviour)], n: &Behaviour) -> Found {
        let key = state_key(ctx, Some(n));
        if let Some(f) = self.enter(&key) {
            return f;
        }
        self.ancestors.insert(key.clone());
        let mut branches = BTreeMap::new();
        let mut out = None;
        for a in n.connective().actions() {
            let mut inner = ctx.to_vec();
            let mut vars = Vec::new();
            for x in &a.vars {
                self.fresh += 1;
                let w = Var::new(&format!("y{}", self.fresh));
                inner.push((w.clone(), n.arg_for(x).clone()));
                vars.push(w);
            }
            match self.positive(&inner) {
                Found::Yes(body) => {
                    branches.insert(a.name.clone(), Branch::new(vars, body));
                }
                other => {
                    out = Some(other);
                    break;
                }
            }
        }
        self.ancestors.remove(&key);
        out.unwrap_or(Found::Yes(Design::Sum(branches)))
    }
}

/// Alternatives of a layer, each the list of formulas under its shifts.
fn alternatives(f: &Formula) -> Vec<Vec<Formula>> {
    match f.node() {
        Node::Zero => vec![],
        Node::One => vec![vec![]],
        Node::Shift(a) => vec![vec![a.as_ref().clone()]],
        Node::Add(a, b) => {
            let mut out = alternatives(a);
            out.extend(alternatives(b));
            out
        }
        Node::Mul(a, b) => {
            let right = alternatives(b);
            let mut out = Vec::new();
            for x in alternatives(a) {
                for y in &right {
                    out.push(x.iter().chain(y).cloned().collect());
                }
            }
            out
        }
    }
}

/// Direct proof search with the three rule schemas of synthetic
/// connectives: a positive rule per alternative of the positive formula,
/// the unique negative rule, and dereliction of a `?`-formula.
pub fn prove_llp_syn_direct(s: &StrictSequent, fuel: usize) -> Option<bool> {
    prove_llp_syn_traced(s, fuel, &mut Vec::new())
}

/// As [`prove_llp_syn_direct`], recording every sequent visited.
pub fn prove_llp_syn_traced(s: &StrictSequent, fuel: usize, trace: &mut Vec<StrictSequent>) -> Option<bool> {
    let mut d = Direct { fuel, visited: 0, ancestors: HashSet::new(), trace };
    let gamma: BTreeSet<Formula> = s.gamma.iter().cloned().collect();
    d.go(&gamma, s.d.as_ref())
}

struct Direct<'a> {
    fuel: usize,
    visited: usize,
    ancestors: HashSet<(BTreeSet<Formula>, Option<Formula>)>,
    trace: &'a mut Vec<StrictSequent>,
}

impl Direct<'_> {
    fn go(&mut self, gamma: &BTreeSet<Formula>, d: Option<&Formula>) -> Option<bool> {
        let key = (gamma.clone(), d.cloned());
        if self.ancestors.contains(&key) {
            return Some(false);
        }
        if self.visited >= self.fuel {
            return None;
        }
        self.visited += 1;
        self.trace.push(StrictSequent { gamma: gamma.iter().cloned().collect(), d: d.cloned() });
        self.ancestors.insert(key.clone());
        let out = match d {
            Some(f) if f.polarity() == Polarity::Positive => self.positive(gamma, f),
            Some(f) => {
                let mut result = Some(true);
                for premise in alternatives(f) {
                    let mut g = gamma.clone();
                    g.extend(premise);
                    match self.go(&g, None) {
                        Some(true) => {}
                        other => {
                            result = other;
                            break;
                        }
                    }
                }
                result
            }
            None => {
                let mut result = Some(false);
                for p in gamma {
                    match self.go(gamma, Some(p)) {
                        Some(true) => {
                            result = Some(true);
                            break;
                        }
                        None => result = None,
                        Some(false) => {}
                    }
                }
                result
            }
        };
        self.ancestors.remove(&key);
        out
    }

    fn positive(&mut self, gamma: &BTreeSet<Formula>, p: &Formula) -> Option<bool> {
        let mut result = Some(false);
        'alts: for alt in alternatives(p) {
            for n in &alt {
                match self.go(gamma, Some(n)) {
                    Some(true) => {}
                    Some(false) => continue 'alts,
                    None => {
                        result = None;
                        continue 'alts;
                    }
                }
            }
            return Some(true);
        }
        result
    }
}

/// Strict sequents over formulas of at most `size` nodes: `|- D` for every
/// formula, `|- ?P` for every positive formula, `|- ?P, D` with `P` of at
/// most two nodes, and `|- ?P, ?Q` with `P`, `Q` distinct of at most
/// `size - 1` nodes. Duplicates are removed.
pub fn enumerate_strict_sequents(size: usize) -> Vec<StrictSequent> {
    let pos = formulas_up_to(Polarity::Positive, size);
    let neg = formulas_up_to(Polarity::Negative, size);
    let all: Vec<&Formula> = pos.iter().chain(&neg).collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let mut push = |fs: Vec<Formula>| {
        if let Ok(s) = StrictSequent::from_formulas(fs) {
            let mut key = s.clone();
            key.gamma.sort();
            if seen.insert(key) {
                out.push(s);
            }
        }
    };
    for d in &all {
        push(vec![(*d).clone()]);
    }
    for p in &pos {
        push(vec![Formula::shift(p.clone())]);
    }
    for p in pos.iter().filter(|p| p.size() <= 2) {
        for d in &all {
            push(vec![Formula::shift(p.clone()), (*d).clone()]);
        }
    }
    let small: Vec<&Formula> = pos.iter().filter(|p| p.size() < size).collect();
    for (i, p) in small.iter().enumerate() {
        for q in &small[i + 1..] {
            push(vec![Formula::shift((*p).clone()), Formula::shift((*q).clone())]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn both(text: &str) -> (Option<bool>, Option<bool>) {
        let s = StrictSequent::parse(text).unwrap();
        (prove_llp(&s, 10_000).unwrap().verdict, prove_llp_syn_direct(&s, 10_000))
    }

    #[test]
    fn named_cases() {
        assert_eq!(both("1"), (Some(true), Some(true)));
        assert_eq!(both("B | T"), (Some(true), Some(true)));
        assert_eq!(both("0"), (Some(false), Some(false)));
        assert_eq!(both("?1, 0"), (Some(false), Some(false)));
        assert_eq!(both("?1, ?0"), (Some(true), Some(true)));
        assert_eq!(both("!(?1)"), (Some(true), Some(true)));
        assert_eq!(both("B"), (Some(false), Some(false)));
    }

    #[test]
    fn not_strict() {
        assert!(matches!(StrictSequent::parse("1, 1"), Err(LlpError::NotStrict(_))));
        let s = StrictSequent::parse("?1, ?0, B").unwrap();
        assert_eq!(s.gamma.len(), 2);
        assert_eq!(s.to_string(), "|- ?1, ?0, B");
    }

    #[test]
    fn proof_design_checks() {
        let s = StrictSequent::parse("?(1 * !(?1 & T)), B").unwrap();
        let p = prove_llp(&s, 1000).unwrap();
        assert_eq!(p.verdict, Some(true));
        assert!(p.sequent.is_some());
    }

    #[test]
    fn traced_sequents_are_strict() {
        let s = StrictSequent::parse("?(!(?1 | B) + 0), ?!T").unwrap();
        let mut trace = Vec::new();
        prove_llp_syn_traced(&s, 1000, &mut trace);
        assert!(!trace.is_empty());
        for t in &trace {
            assert!(StrictSequent::from_formulas(t.formulas()).is_ok());
        }
    }

    #[test]
    fn small_corpus_agrees() {
        let corpus = enumerate_strict_sequents(3);
        assert!(corpus.len() > 50);
        for s in &corpus {
            assert_eq!(prove_llp(s, 10_000).unwrap().verdict, prove_llp_syn_direct(s, 10_000), "{s}");
        }
    }
}
