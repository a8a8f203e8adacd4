//! Countermodels from failed proof search.
//!
//! Along the open branch every positive step `z | a<..>` followed into the
//! `k`-th argument and the `b` branch of its abstraction contributes the
//! negative design `a(x). x_k | b<M(y)..> + (daimon on the other actions)`;
//! the model of a variable is the meet of the contributions of the steps
//! it heads. Substituting the models for the context variables makes the
//! subject diverge along the branch.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::behaviour::{member_by_shape, ethics_sample, negative_sample, Behaviour, Context};
use crate::design::{
    big_meet, daimon_minus, substitute, Branch, DefId, DefSystem, Design, DesignError, Name, Polarity, Signature, Var,
};
use crate::normalize::{evaluate_closed, interact, orthogonal, Certificate, EvalOutcome, NormalizeError, Verdict};
use crate::proofsys::{
    prove_with, BranchEnd, Derivation, ProofError, ProofResult, Rule, SearchBranch, SearchOptions, Sequent,
};

pub use report::{render_model, render_report};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CountermodelError {
    #[error("the sequent is derivable")]
    Derived,
    #[error(transparent)]
    Proof(#[from] ProofError),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error("malformed branch: {0}")]
    Branch(String),
    #[error("the assignment does not cover `{0}`")]
    Mismatch(Var),
}

/// Result of searching for the open branch.
#[derive(Debug, Clone)]
pub enum BranchOutcome {
    Derived(Derivation),
    Branch(SearchBranch),
}

/// Runs the search; a failing or non-terminating search yields its branch.
pub fn open_branch(s: &Sequent, defs: &DefSystem, opts: &SearchOptions) -> Result<BranchOutcome, CountermodelError> {
    Ok(match prove_with(s, defs, opts)? {
        ProofResult::Derived(d) => BranchOutcome::Derived(d),
        ProofResult::Failed(b) | ProofResult::OutOfFuel(b) => BranchOutcome::Branch(b),
    })
}

/// The branch cut at its `k`-th positive sequent, with periodicity
/// detection off.
pub fn truncated_branch(s: &Sequent, defs: &DefSystem, k: usize) -> Result<BranchOutcome, CountermodelError> {
    let offset = usize::from(s.polarity() == Polarity::Negative);
    let mut opts = SearchOptions::new(usize::MAX).without_periodicity();
    opts.max_depth = 2 * k + offset;
    open_branch(s, defs, &opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Built from a stuck branch: the model of the completeness proof.
    Exact,
    /// Built from a repeating branch, presented by cyclic definitions.
    Periodic { start: usize, length: usize },
    /// The approximant at level `k` of a truncated branch.
    Approximant { k: usize },
}

/// Models for the variables of the root context.
#[derive(Debug, Clone)]
pub struct ModelAssignment {
    pub kind: ModelKind,
    /// `M(x)` for each variable of the root context, in context order.
    pub models: Vec<(Var, Design)>,
    /// For a negative root: the positive design `x0 | b<..>` that follows
    /// the branch into the subject.
    pub test: Option<Design>,
    /// `M(i)` for each positive sequent of the branch.
    pub positions: Vec<Design>,
    /// The subject's definitions extended with those of the model.
    pub defs: DefSystem,
}

impl ModelAssignment {
    pub fn model(&self, v: &Var) -> Option<&Design> {
        self.models.iter().find(|(w, _)| w == v).map(|(_, d)| d)
    }

    /// Definitions used by the model designs.
    pub fn model_defs(&self) -> Vec<DefId> {
        let roots: Vec<&Design> = self.models.iter().map(|(_, d)| d).chain(self.test.iter()).collect();
        self.defs.reachable(&roots)
    }

    /// No model design refers to a definition.
    pub fn is_finite(&self) -> bool {
        self.model_defs().is_empty()
    }
}

/// One positive step of the branch and the abstraction branch followed.
struct PosStep {
    head: Var,
    behaviour: Behaviour,
    action: Name,
    premise: usize,
    inner: Name,
    fresh: Vec<Var>,
}

enum End {
    Omega,
    /// `Σ_{α0} a(x).daimon` on the head's behaviour.
    Saturated(Var, Behaviour),
}

struct Shape {
    root_neg: Option<(Name, Vec<Var>)>,
    steps: Vec<PosStep>,
    /// Head variable of each positive sequent, end included.
    heads: Vec<Option<Var>>,
    end: End,
    /// Live variables at the repetition mapped to those at `start`.
    period: Option<(usize, BTreeMap<Var, Var>)>,
}

fn fresh_vars(seq: &Sequent, count: usize) -> Vec<Var> {
    let n = seq.ctx.pos.len();
    seq.ctx.pos[n - count..].iter().map(|(v, _)| v.clone()).collect()
}

fn head_of(seq: &Sequent, defs: &DefSystem) -> Option<Var> {
    let items = seq.subject.expose_pos(defs)?;
    items.first().and_then(|p| p.head_var().cloned())
}

fn analyse(b: &SearchBranch, defs: &DefSystem) -> Result<Shape, CountermodelError> {
    let bad = |m: &str| CountermodelError::Branch(m.to_string());
    let mut steps_iter = b.steps.iter().peekable();
    let mut root_neg = None;
    if let Some(first) = b.steps.first() {
        if let Rule::Negative { behaviour } = &first.rule {
            let a = &behaviour.connective().actions()[first.premise];
            let next = b.steps.get(1).map(|s| &s.sequent).unwrap_or(&b.last);
            root_neg = Some((a.name.clone(), fresh_vars(next, a.vars.len())));
            steps_iter.next();
        }
    }
    let mut steps = Vec::new();
    let mut trailing: Option<&Sequent> = None;
    while let Some(pos) = steps_iter.next() {
        let Rule::Positive { var, behaviour, action } = &pos.rule else {
            return Err(bad("expected a positive step"));
        };
        let Some(neg) = steps_iter.next() else {
            // The branch ends at the negative premise of this step.
            trailing = Some(&pos.sequent);
            break;
        };
        let Rule::Negative { behaviour: inner } = &neg.rule else {
            return Err(bad("expected a negative step"));
        };
        let b_action = &inner.connective().actions()[neg.premise];
        let next = steps_iter.peek().map(|s| &s.sequent).unwrap_or(&b.last);
        steps.push(PosStep {
            head: var.clone(),
            behaviour: behaviour.clone(),
            action: action.clone(),
            premise: pos.premise,
            inner: b_action.name.clone(),
            fresh: fresh_vars(next, b_action.vars.len()),
        });
    }
    let mut heads: Vec<Option<Var>> = steps.iter().map(|s| Some(s.head.clone())).collect();
    let saturate = |seq: &Sequent| -> Result<End, CountermodelError> {
        let z = head_of(seq, defs).ok_or_else(|| bad("the last sequent has no head variable"))?;
        let beh = seq.ctx.lookup(&z).ok_or_else(|| bad("head variable outside the context"))?.clone();
        Ok(End::Saturated(z, beh))
    };
    let (end, period) = match (&b.end, trailing) {
        (_, Some(seq)) => {
            if matches!(b.end, BranchEnd::StuckOmega | BranchEnd::StuckName { .. }) {
                return Err(bad("stuck at a negative sequent"));
            }
            (saturate(seq)?, None)
        }
        (BranchEnd::StuckOmega, None) => (End::Omega, None),
        (BranchEnd::StuckName { var, behaviour, .. }, None) => (End::Saturated(var.clone(), behaviour.clone()), None),
        (BranchEnd::Truncated, None) => (saturate(&b.last)?, None),
        (BranchEnd::Periodic { start, renaming }, None) => {
            // `start` indexes the steps; convert to a positive index.
            let offset = usize::from(root_neg.is_some());
            if *start < offset || (start - offset) % 2 != 0 {
                return Err(bad("period does not start at a positive sequent"));
            }
            let s = (start - offset) / 2;
            (End::Omega, Some((s, renaming.iter().cloned().collect())))
        }
    };
    if period.is_none() {
        heads.push(match &end {
            End::Omega => None,
            End::Saturated(z, _) => Some(z.clone()),
        });
    }
    Ok(Shape { root_neg, steps, heads, end, period })
}

/// Signature of every name of the subject, its definitions and the
/// context behaviours; the negative daimon ranges over it.
fn signature_of(s: &Sequent, defs: &DefSystem) -> Signature {
    let mut names = BTreeMap::new();
    s.subject.names(&mut names);
    for id in defs.reachable(&[&s.subject]) {
        if let Some(def) = defs.get(&id) {
            def.body.names(&mut names);
        }
    }
    for (_, b) in &s.ctx.pos {
        b.names(&mut names);
    }
    if let Some(n) = &s.ctx.neg {
        n.names(&mut names);
    }
    let mut sig = Signature::new();
    for (n, a) in names {
        let _ = sig.declare(&n, a);
    }
    sig
}

fn saturated(b: &Behaviour) -> Design {
    Design::sum(b.connective().actions().iter().map(|a| (a.name.clone(), Branch::new(a.vars.clone(), Design::daimon()))))
}

/// `a(x). x_k | b<args> + Σ c(w).daimon` over the actions of `behaviour`.
fn position(step: &PosStep, args: Vec<Design>) -> Design {
    let conn = step.behaviour.connective();
    Design::sum(conn.actions().iter().map(|a| {
        let body = if a.name == step.action {
            Design::pred(Design::Var(a.vars[step.premise].clone()), step.inner.clone(), args.clone())
        } else {
            Design::daimon()
        };
        (a.name.clone(), Branch::new(a.vars.clone(), body))
    }))
}

/// Builds the countermodel of a branch rooted at `s`.
pub fn build_countermodel(s: &Sequent, branch: &SearchBranch, defs: &DefSystem) -> Result<ModelAssignment, CountermodelError> {
    let shape = analyse(branch, defs)?;
    let sig = signature_of(s, defs);
    let dminus = daimon_minus(&sig)?;
    let defs = defs.clone();
    let kind = match (&shape.period, &branch.end) {
        (Some((start, _)), _) => ModelKind::Periodic { start: *start, length: shape.steps.len() - start },
        (None, BranchEnd::Truncated) => ModelKind::Approximant { k: shape.steps.len() },
        _ => ModelKind::Exact,
    };
    let contributors = |w: &Var| -> Vec<usize> {
        let mut out: BTreeSet<usize> =
            shape.heads.iter().enumerate().filter(|(_, h)| h.as_ref() == Some(w)).map(|(j, _)| j).collect();
        if let Some((start, ren)) = &shape.period {
            let mut seen = BTreeSet::new();
            let mut cur = ren.get(w).cloned();
            while let Some(v) = cur {
                if !seen.insert(v.clone()) {
                    break;
                }
                out.extend((*start..shape.steps.len()).filter(|&j| shape.heads[j].as_ref() == Some(&v)));
                cur = ren.get(&v).cloned();
            }
        }
        out.into_iter().collect()
    };
    let end_design = match &shape.end {
        End::Omega => dminus.clone(),
        End::Saturated(_, b) => saturated(b),
    };

    let n = shape.steps.len();
    let (positions, mut table) = if shape.period.is_none() {
        let mut pos: Vec<Option<Design>> = vec![None; n + 1];
        pos[n] = Some(end_design);
        for i in (0..n).rev() {
            let mut args = Vec::new();
            for y in &shape.steps[i].fresh {
                let parts: Vec<Design> = contributors(y).iter().map(|&j| pos[j].clone().expect("later position")).collect();
                args.push(meet_designs(&parts, &dminus, &defs)?);
            }
            pos[i] = Some(position(&shape.steps[i], args));
        }
        let pos: Vec<Design> = pos.into_iter().map(Option::unwrap).collect();
        (pos.clone(), Table::Direct(pos))
    } else {
        // Each position becomes a definition, so the model can refer back
        // to earlier positions of the period.
        let ids: Vec<DefId> = (0..n).map(|j| model_id(&defs, &format!("m{j}"))).collect();
        let mut shared = Shared { ids, meets: BTreeMap::new(), dminus: dminus.clone() };
        let mut bodies = Vec::new();
        for step in &shape.steps {
            let args: Vec<Design> = step.fresh.iter().map(|y| shared.refer(&contributors(y), &defs)).collect();
            bodies.push(position(step, args));
        }
        for (id, body) in shared.ids.iter().zip(bodies) {
            defs.insert_trusted(id.clone(), vec![], body, Polarity::Negative);
        }
        shared.fill(&defs)?;
        (shared.ids.iter().map(|id| Design::Ref(id.clone(), vec![])).collect(), Table::Shared(shared))
    };
    let mut meet_of = |js: &[usize]| -> Result<Design, CountermodelError> {
        match &mut table {
            Table::Direct(pos) => meet_designs(&js.iter().map(|&j| pos[j].clone()).collect::<Vec<_>>(), &dminus, &defs),
            Table::Shared(sh) => {
                let d = sh.refer(js, &defs);
                sh.fill(&defs)?;
                Ok(d)
            }
        }
    };
    let mut models = Vec::new();
    for (x, _) in &s.ctx.pos {
        models.push((x.clone(), meet_of(&contributors(x))?));
    }
    let test = match &shape.root_neg {
        None => None,
        Some((name, ys)) => {
            let args = ys.iter().map(|y| meet_of(&contributors(y))).collect::<Result<Vec<_>, _>>()?;
            Some(Design::on_x0(name.clone(), args))
        }
    };
    Ok(ModelAssignment { kind, models, test, positions, defs })
}

enum Table {
    Direct(Vec<Design>),
    Shared(Shared),
}

/// Definitions of a periodic model: one per position, one per meet of
/// several positions.
struct Shared {
    ids: Vec<DefId>,
    meets: BTreeMap<Vec<usize>, (DefId, bool)>,
    dminus: Design,
}

impl Shared {
    fn refer(&mut self, js: &[usize], defs: &DefSystem) -> Design {
        match js {
            [] => self.dminus.clone(),
            [j] => Design::Ref(self.ids[*j].clone(), vec![]),
            _ => {
                let next = self.meets.len();
                let (id, _) = self.meets.entry(js.to_vec()).or_insert_with(|| (model_id(defs, &format!("mm{next}")), false));
                Design::Ref(id.clone(), vec![])
            }
        }
    }

    fn fill(&mut self, defs: &DefSystem) -> Result<(), CountermodelError> {
        for (js, (id, done)) in self.meets.iter_mut() {
            if !*done {
                let parts: Vec<Design> = js.iter().map(|&j| Design::Ref(self.ids[j].clone(), vec![])).collect();
                let body = big_meet(&parts, defs)?;
                defs.insert_trusted(id.clone(), vec![], body, Polarity::Negative);
                *done = true;
            }
        }
        Ok(())
    }
}

fn model_id(defs: &DefSystem, base: &str) -> DefId {
    let id = DefId::new(base);
    if defs.get(&id).is_none() {
        id
    } else {
        defs.fresh_id(base)
    }
}

fn meet_designs(xs: &[Design], dminus: &Design, defs: &DefSystem) -> Result<Design, CountermodelError> {
    if xs.is_empty() {
        return Ok(dminus.clone());
    }
    Ok(big_meet(xs, defs)?)
}

/// Open branch and countermodel of an underivable sequent.
pub fn countermodel(s: &Sequent, defs: &DefSystem, fuel: usize) -> Result<(SearchBranch, ModelAssignment), CountermodelError> {
    match open_branch(s, defs, &SearchOptions::new(fuel))? {
        BranchOutcome::Derived(_) => Err(CountermodelError::Derived),
        BranchOutcome::Branch(b) => {
            let m = build_countermodel(s, &b, defs)?;
            Ok((b, m))
        }
    }
}

/// The approximant `M^k` along the search branch cut at depth `k`.
pub fn approximant(s: &Sequent, defs: &DefSystem, k: usize) -> Result<ModelAssignment, CountermodelError> {
    match truncated_branch(s, defs, k)? {
        BranchOutcome::Derived(_) => Err(CountermodelError::Derived),
        BranchOutcome::Branch(b) => build_countermodel(s, &b, defs),
    }
}

/// Evaluation of the subject against the model.
#[derive(Debug, Clone)]
pub struct DefeatReport {
    pub outcome: EvalOutcome,
    /// For an approximant whose evaluation does not diverge: the number of
    /// branch steps it is built to follow.
    pub progress: Option<usize>,
}

impl DefeatReport {
    pub fn verdict(&self) -> Verdict {
        match self.progress {
            Some(_) => Verdict::Unknown,
            None => self.outcome.verdict,
        }
    }
}

impl fmt::Display for DefeatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.progress {
            Some(k) => write!(f, "unknown (approximant follows the branch for {k} steps; evaluation: {})", self.outcome),
            None => write!(f, "{}", self.outcome),
        }
    }
}

/// Substitutes the models for the context variables and evaluates (for a
/// negative root, against the test design).
pub fn verify_defeat(s: &Sequent, m: &ModelAssignment, fuel: usize) -> Result<DefeatReport, CountermodelError> {
    let mut bindings = BTreeMap::new();
    for (x, _) in &s.ctx.pos {
        let d = m.model(x).ok_or_else(|| CountermodelError::Mismatch(x.clone()))?;
        bindings.insert(x.clone(), d.clone());
    }
    let inst = substitute(&s.subject, &bindings, &m.defs)?;
    let outcome = match (&s.ctx.neg, &m.test) {
        (None, _) => evaluate_closed(&inst, &m.defs, fuel)?,
        (Some(_), Some(q)) => interact(q, &inst, &m.defs, fuel)?,
        (Some(_), None) => return Err(CountermodelError::Mismatch(Var::x0())),
    };
    let progress = match m.kind {
        ModelKind::Approximant { k } if outcome.verdict != Verdict::Omega => Some(k),
        _ => None,
    };
    Ok(DefeatReport { outcome, progress })
}

/// Membership evidence for one model.
#[derive(Debug, Clone)]
pub struct EntryReport {
    /// The context variable, or `x0` for the test of a negative root.
    pub var: Var,
    pub behaviour: Behaviour,
    pub tested: usize,
    /// Aggregate of the sampled orthogonality tests.
    pub sampled: Verdict,
    pub failure: Option<(Design, EvalOutcome)>,
    /// Structural membership, for finite models.
    pub shape: Option<bool>,
}

impl EntryReport {
    pub fn passed(&self) -> bool {
        self.sampled == Verdict::Daimon && self.shape != Some(false)
    }
}

#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub entries: Vec<EntryReport>,
}

impl MembershipReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(EntryReport::passed)
    }
}

/// Checks `M(x) ∈ P⊥` for each `x:P` of the context: orthogonality to the
/// first `samples` ethics members of `P`, and the structural check when
/// `M(x)` is finite. For a negative root the test design is checked
/// against members of the slot.
pub fn verify_countermodel_membership(
    s: &Sequent,
    m: &ModelAssignment,
    fuel: usize,
    samples: usize,
) -> Result<MembershipReport, CountermodelError> {
    let mut entries = Vec::new();
    for (x, b) in &s.ctx.pos {
        let mx = m.model(x).ok_or_else(|| CountermodelError::Mismatch(x.clone()))?;
        let mut e = EntryReport {
            var: x.clone(),
            behaviour: b.clone(),
            tested: 0,
            sampled: Verdict::Daimon,
            failure: None,
            shape: None,
        };
        for t in ethics_sample(b, samples) {
            let out = orthogonal(&t, mx, &m.defs, fuel)?;
            tally(&mut e, t, out);
        }
        if m.defs.reachable(&[mx]).is_empty() {
            e.shape = Some(member_by_shape(mx, &b.dual(), &m.defs));
        }
        entries.push(e);
    }
    if let (Some(n), Some(q)) = (&s.ctx.neg, &m.test) {
        let mut e = EntryReport {
            var: Var::x0(),
            behaviour: n.dual(),
            tested: 0,
            sampled: Verdict::Daimon,
            failure: None,
            shape: None,
        };
        for k in negative_sample(n, samples) {
            let out = orthogonal(q, &k, &m.defs, fuel)?;
            tally(&mut e, k, out);
        }
        if m.defs.reachable(&[q]).is_empty() {
            e.shape = Some(member_by_shape(q, &n.dual(), &m.defs));
        }
        entries.push(e);
    }
    Ok(MembershipReport { entries })
}

fn tally(e: &mut EntryReport, against: Design, out: EvalOutcome) {
    e.tested += 1;
    match out.verdict {
        Verdict::Daimon => {}
        Verdict::Omega => {
            if e.sampled != Verdict::Omega {
                e.sampled = Verdict::Omega;
                e.failure = Some((against, out));
            }
        }
        Verdict::Unknown => {
            if e.sampled == Verdict::Daimon {
                e.sampled = Verdict::Unknown;
                e.failure = Some((against, out));
            }
        }
    }
}

/// Whether the evaluation's certificate is a detected cycle.
pub fn is_cycle(r: &DefeatReport) -> bool {
    matches!(r.outcome.certificate, Certificate::Cycle { .. })
}

/// Convenience for `Context` lookups by name.
pub fn context_var(ctx: &Context, name: &str) -> Option<Behaviour> {
    ctx.lookup(&Var::new(name)).cloned()
}

#[cfg(test)]
mod tests;
