//! Sequents over logical behaviours and the deterministic cut-free proof
//! search.
//!
//! A positive sequent `z | a<M..> |- G` is decided by the behaviour of `z`
//! in `G` and the name `a`; a negative sequent `{..} |- G, N` by the
//! connective of `N`. Search therefore builds a unique tree; it fails at
//! an `Omega` subject, at a name outside the connective, or runs forever.

mod check;
mod enumerate;
mod print;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::behaviour::{fresh_like, Behaviour, BehaviourError, Context};
use crate::design::{
    classify, key_with_free_renaming, substitute_unchecked, DefSystem, Design, Name, Polarity, Var,
};
use crate::syntax::{ParseError, Parser};

pub use check::{check_cut_derivation, check_derivation, CheckError};
pub use print::render_branch;
pub use enumerate::{enumerate_members, enumerate_proofs, enumerate_sized, EnumMode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProofError {
    #[error("not a proof: {0}")]
    NotAProof(String),
    #[error("the subject contains a cut")]
    Cut,
    #[error("free variable `{0}` is not in the context")]
    Unbound(Var),
    #[error("a {subject} subject needs a {expected} sequent")]
    Polarity { subject: Polarity, expected: &'static str },
    #[error("`{name}` has {found} arguments, the connective expects {expected}")]
    Arity { name: Name, expected: usize, found: usize },
    #[error("linear split: variable `{0}` is used by two premises")]
    LinearSplit(Var),
    #[error("proof search ran out of fuel")]
    OutOfFuel,
    #[error(transparent)]
    Context(#[from] BehaviourError),
}

/// `subject |- ctx`; positive when the context has no negative slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequent {
    pub subject: Design,
    pub ctx: Context,
}

impl Sequent {
    pub fn new(subject: Design, ctx: Context) -> Sequent {
        Sequent { subject, ctx }
    }

    pub fn polarity(&self) -> Polarity {
        if self.ctx.neg.is_some() {
            Polarity::Negative
        } else {
            Polarity::Positive
        }
    }

    /// Shape checks: context well formed, polarity of the subject agrees
    /// with the slot, free variables declared.
    pub fn validate(&self, defs: &DefSystem) -> Result<(), ProofError> {
        self.ctx.validate()?;
        let pol = self.subject.polarity(defs).unwrap_or(Polarity::Positive);
        if pol != self.polarity() {
            let expected = if pol == Polarity::Positive { "positive" } else { "negative" };
            return Err(ProofError::Polarity { subject: pol, expected });
        }
        if let Some(v) = self.subject.free_vars().into_iter().find(|v| !self.ctx.contains(v)) {
            return Err(ProofError::Unbound(v));
        }
        Ok(())
    }

    /// Key identifying the sequent up to renaming, ignoring context
    /// entries the subject does not use.
    pub fn state_key(&self) -> (String, Vec<Var>) {
        let (shape, order) = key_with_free_renaming(&self.subject);
        let mut key = shape;
        key.push('#');
        for v in &order {
            key.push_str(self.ctx.lookup(v).map(Behaviour::key).unwrap_or("?"));
            key.push(';');
        }
        key.push('#');
        if let Some(n) = &self.ctx.neg {
            key.push_str(n.key());
        }
        (key, order)
    }
}

/// A rule instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `(α̅, a̅)` on the context variable `var` of behaviour `behaviour`.
    Positive { var: Var, behaviour: Behaviour, action: Name },
    /// `(α)` on the negative slot.
    Negative { behaviour: Behaviour },
    /// `D |- X, G, var:lemma` and `N |- G, lemma⊥` give `D[N/var] |- X, G`.
    Cut { var: Var, lemma: Behaviour },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Number of rule instances.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }
}

/// What the search does at a sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Apply { rule: Rule, premises: Vec<Sequent> },
    /// The subject is `Omega`.
    StuckOmega,
    /// The subject's name is not an action of the head's connective.
    StuckName { var: Var, name: Name, behaviour: Behaviour },
}

/// The shared positive rule keeps the whole context in every premise; the
/// linear one drops the principal variable and splits the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    #[default]
    Shared,
    Linear,
}

/// The unique rule applicable to `s`.
pub fn next_rule(s: &Sequent, defs: &DefSystem) -> Result<Step, ProofError> {
    next_rule_in(s, defs, SearchMode::Shared)
}

pub fn next_rule_in(s: &Sequent, defs: &DefSystem, mode: SearchMode) -> Result<Step, ProofError> {
    match &s.ctx.neg {
        None => positive_step(s, defs, mode),
        Some(neg) => negative_step(s, neg, defs),
    }
}

fn positive_step(s: &Sequent, defs: &DefSystem, mode: SearchMode) -> Result<Step, ProofError> {
    if s.subject.polarity(defs) != Some(Polarity::Positive) {
        return Err(ProofError::Polarity { subject: Polarity::Negative, expected: "negative" });
    }
    let Some(mut items) = s.subject.expose_pos(defs) else { return Ok(Step::StuckOmega) };
    if items.len() != 1 {
        return Err(ProofError::NotAProof(format!("conjunction of {} designs", items.len())));
    }
    let p = items.pop().unwrap();
    let z = match p.head.expose_neg(defs) {
        Design::Var(z) => z,
        _ => return Err(ProofError::Cut),
    };
    let Some(beh) = s.ctx.lookup(&z) else { return Err(ProofError::Unbound(z)) };
    let Some(action) = beh.connective().action(&p.name) else {
        return Ok(Step::StuckName { var: z, name: p.name, behaviour: beh.clone() });
    };
    if action.vars.len() != p.args.len() {
        return Err(ProofError::Arity { name: p.name, expected: action.vars.len(), found: p.args.len() });
    }
    let rule = Rule::Positive { var: z.clone(), behaviour: beh.clone(), action: p.name.clone() };
    let mut premises: Vec<Sequent> = action
        .vars
        .iter()
        .zip(&p.args)
        .map(|(x, m)| Sequent::new(m.clone(), s.ctx.clone().with_neg(beh.arg_for(x).clone())))
        .collect();
    if mode == SearchMode::Linear {
        let mut owner: BTreeMap<Var, usize> = BTreeMap::new();
        for (j, q) in premises.iter().enumerate() {
            for v in q.subject.free_vars() {
                if owner.insert(v.clone(), j).is_some() {
                    return Err(ProofError::LinearSplit(v));
                }
            }
        }
        for (j, q) in premises.iter_mut().enumerate() {
            let keep: BTreeSet<Var> =
                s.ctx.vars().filter(|v| **v != z && owner.get(*v) == Some(&j)).cloned().collect();
            q.ctx = q.ctx.restrict(&keep);
        }
    }
    Ok(Step::Apply { rule, premises })
}

fn negative_step(s: &Sequent, neg: &Behaviour, defs: &DefSystem) -> Result<Step, ProofError> {
    let bs = match s.subject.expose_neg(defs) {
        Design::Sum(bs) => bs,
        Design::Var(v) => return Err(ProofError::NotAProof(format!("variable `{v}` as negative subject"))),
        _ => return Err(ProofError::Polarity { subject: Polarity::Positive, expected: "positive" }),
    };
    let mut premises = Vec::new();
    for action in neg.connective().actions() {
        let mut chosen: Vec<Var> = Vec::new();
        for x in &action.vars {
            let taken = |v: &Var| s.ctx.contains(v) || chosen.contains(v);
            let w = fresh_like(x, &taken);
            chosen.push(w);
        }
        let body = match bs.get(&action.name) {
            None => Design::Omega,
            Some(b) if b.vars.len() != chosen.len() => {
                return Err(ProofError::Arity {
                    name: action.name.clone(),
                    expected: chosen.len(),
                    found: b.vars.len(),
                })
            }
            Some(b) => {
                let map: BTreeMap<Var, Design> = b
                    .vars
                    .iter()
                    .zip(&chosen)
                    .filter(|(v, w)| v != w)
                    .map(|(v, w)| (v.clone(), Design::Var(w.clone())))
                    .collect();
                substitute_unchecked(&b.body, &map, defs)
            }
        };
        let mut ctx = Context { pos: s.ctx.pos.clone(), neg: None };
        for (x, w) in action.vars.iter().zip(&chosen) {
            ctx.pos.push((w.clone(), neg.arg_for(x).clone()));
        }
        premises.push(Sequent::new(body, ctx));
    }
    Ok(Step::Apply { rule: Rule::Negative { behaviour: neg.clone() }, premises })
}

/// Proof-shape check of a subject: cut-free, identity-free, deterministic,
/// unary conjunctions only. A bare `Omega` is accepted (it gets stuck).
pub fn check_proof_subject(d: &Design, defs: &DefSystem) -> Result<(), ProofError> {
    if d.is_omega() {
        return Ok(());
    }
    let c = classify(d, defs);
    if !c.cut_free {
        return Err(ProofError::Cut);
    }
    if !c.identity_free {
        return Err(ProofError::NotAProof("a variable occurs as an argument".into()));
    }
    if !c.is_proof {
        return Err(ProofError::NotAProof("conjunctions must be unary".into()));
    }
    Ok(())
}

/// One step of a branch: the sequent, the rule applied to it and the
/// premise the branch continues into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchStep {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premise: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchEnd {
    StuckOmega,
    StuckName { var: Var, name: Name, behaviour: Behaviour },
    /// Fuel ran out at the last sequent.
    Truncated,
    /// The last sequent repeats `steps[start]`; `renaming` maps its live
    /// variables to those of the earlier sequent.
    Periodic { start: usize, renaming: Vec<(Var, Var)> },
}

/// Root-to-leaf path of the search tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBranch {
    pub steps: Vec<BranchStep>,
    pub last: Sequent,
    pub end: BranchEnd,
}

impl SearchBranch {
    /// Positive sequents of the branch, last one included.
    pub fn positive_sequents(&self) -> Vec<&Sequent> {
        self.steps
            .iter()
            .map(|s| &s.sequent)
            .chain(std::iter::once(&self.last))
            .filter(|s| s.polarity() == Polarity::Positive)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProofResult {
    Derived(Derivation),
    /// The search got stuck at the end of the branch.
    Failed(SearchBranch),
    /// Fuel ran out, or the branch was found to repeat forever.
    OutOfFuel(SearchBranch),
}

impl ProofResult {
    pub fn is_derived(&self) -> bool {
        matches!(self, ProofResult::Derived(_))
    }

    pub fn branch(&self) -> Option<&SearchBranch> {
        match self {
            ProofResult::Derived(_) => None,
            ProofResult::Failed(b) | ProofResult::OutOfFuel(b) => Some(b),
        }
    }

    /// Derivable, definitely not (stuck or periodic), or undetermined.
    pub fn verdict(&self) -> Option<bool> {
        match self {
            ProofResult::Derived(_) => Some(true),
            ProofResult::Failed(_) => Some(false),
            ProofResult::OutOfFuel(b) => matches!(b.end, BranchEnd::Periodic { .. }).then_some(false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of sequents visited.
    pub fuel: usize,
    pub mode: SearchMode,
    /// Stop at the first repetition of a sequent along a branch.
    pub periodicity: bool,
    /// Maximum branch length.
    pub max_depth: usize,
}

impl SearchOptions {
    pub fn new(fuel: usize) -> SearchOptions {
        SearchOptions { fuel, mode: SearchMode::Shared, periodicity: true, max_depth: 10_000 }
    }

    pub fn linear(mut self) -> SearchOptions {
        self.mode = SearchMode::Linear;
        self
    }

    pub fn without_periodicity(mut self) -> SearchOptions {
        self.periodicity = false;
        self
    }
}

/// Deterministic proof search with default options.
pub fn prove(s: &Sequent, defs: &DefSystem, fuel: usize) -> Result<ProofResult, ProofError> {
    prove_with(s, defs, &SearchOptions::new(fuel))
}

pub fn prove_with(s: &Sequent, defs: &DefSystem, opts: &SearchOptions) -> Result<ProofResult, ProofError> {
    s.validate(defs)?;
    check_proof_subject(&s.subject, defs)?;
    let mut search = Search { defs, opts, visited: 0, trail: Vec::new(), keys: HashMap::new() };
    Ok(match search.go(s.clone())? {
        Outcome::Derived(d) => ProofResult::Derived(d),
        Outcome::Open(b) if matches!(b.end, BranchEnd::StuckOmega | BranchEnd::StuckName { .. }) => {
            ProofResult::Failed(b)
        }
        Outcome::Open(b) => ProofResult::OutOfFuel(b),
    })
}

enum Outcome {
    Derived(Derivation),
    Open(SearchBranch),
}

struct Search<'a> {
    defs: &'a DefSystem,
    opts: &'a SearchOptions,
    visited: usize,
    trail: Vec<(BranchStep, Vec<Var>)>,
    keys: HashMap<String, usize>,
}

impl Search<'_> {
    fn open(&self, last: Sequent, end: BranchEnd) -> Outcome {
        let steps = self.trail.iter().map(|(s, _)| s.clone()).collect();
        Outcome::Open(SearchBranch { steps, last, end })
    }

    fn go(&mut self, s: Sequent) -> Result<Outcome, ProofError> {
        let (key, order) = s.state_key();
        let periodic = self.opts.periodicity && s.polarity() == Polarity::Positive;
        if periodic {
            if let Some(&start) = self.keys.get(&key) {
                let earlier = &self.trail[start].1;
                let renaming = order.iter().cloned().zip(earlier.iter().cloned()).collect();
                return Ok(self.open(s, BranchEnd::Periodic { start, renaming }));
            }
        }
        if self.visited >= self.opts.fuel || self.trail.len() >= self.opts.max_depth {
            return Ok(self.open(s, BranchEnd::Truncated));
        }
        self.visited += 1;
        let (rule, premises) = match next_rule_in(&s, self.defs, self.opts.mode)? {
            Step::StuckOmega => return Ok(self.open(s, BranchEnd::StuckOmega)),
            Step::StuckName { var, name, behaviour } => {
                return Ok(self.open(s, BranchEnd::StuckName { var, name, behaviour }))
            }
            Step::Apply { rule, premises } => (rule, premises),
        };
        let fresh_key = periodic && !self.keys.contains_key(&key);
        if fresh_key {
            self.keys.insert(key.clone(), self.trail.len());
        }
        let mut done = Vec::with_capacity(premises.len());
        let mut result = None;
        for (k, p) in premises.into_iter().enumerate() {
            let step = BranchStep { sequent: s.clone(), rule: rule.clone(), premise: k };
            self.trail.push((step, order.clone()));
            let out = self.go(p);
            self.trail.pop();
            match out? {
                Outcome::Derived(d) => done.push(d),
                open => {
                    result = Some(open);
                    break;
                }
            }
        }
        if fresh_key {
            self.keys.remove(&key);
        }
        Ok(result.unwrap_or(Outcome::Derived(Derivation { sequent: s, rule, premises: done })))
    }
}

/// Parses `[declarations] DESIGN |- CONTEXT`.
pub fn parse_sequent(text: &str) -> Result<(Sequent, DefSystem), ParseError> {
    let mut p = Parser::new(text, &crate::design::Signature::new())?;
    p.declarations()?;
    p.close_defs()?;
    let subject = p.any()?;
    p.check_refs(&subject)?;
    p.expect_sym("|-")?;
    let ctx = p.context()?;
    p.expect_end()?;
    let s = Sequent::new(subject, ctx);
    if let Err(e) = s.validate(&p.defs) {
        return p.error(e.to_string());
    }
    let defs = p.defs.clone();
    Ok((s, defs))
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::sequent_line(self, &mut print::Printers::new()))
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::render_derivation(self))
    }
}
