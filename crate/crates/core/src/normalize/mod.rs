//! Reduction, normal forms and orthogonality.
//!
//! A positive design reduces by firing one of its cuts: the successor of
//! `(Σ a(x).P_a) | b<N>` is `P_b[N/x]`, the remaining conjuncts being
//! dropped. Evaluation explores every reachable state, memoized on
//! canonical keys; reaching `Omega` or revisiting a state on the current
//! path makes the design diverge.

pub mod automaton;
mod explore;
mod form;

use std::collections::BTreeMap;
use std::fmt;

use crate::design::{classify, substitute, Design, DefSystem, DesignError, Polarity, Var};

pub use explore::Explorer;
pub use form::{normal_form, NfHead, NormalForm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("design is not closed: free variables {0:?}")]
    Open(Vec<Var>),
    #[error("expected a positive design")]
    NotPositive,
    #[error("not atomic: {0}")]
    NotAtomic(String),
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Daimon,
    Omega,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Daimon => "daimon",
            Verdict::Omega => "omega",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Why a verdict was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Every reachable state was explored; none is `Omega`, no path loops.
    Explored { states: usize, edges: usize },
    /// A reduction path ending in `Omega`.
    OmegaPath(Vec<Design>),
    /// A reduction path whose last state repeats the state at `back_to`.
    Cycle { path: Vec<Design>, back_to: usize },
    /// Fuel ran out with this many states on the current path.
    Frontier { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOutcome {
    pub verdict: Verdict,
    pub certificate: Certificate,
    /// Number of distinct states explored.
    pub explored: usize,
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        match &self.certificate {
            Certificate::Explored { states, edges } => write!(f, " ({states} states, {edges} reductions explored)"),
            Certificate::OmegaPath(p) => write!(f, " (omega reached after {} reductions)", p.len().saturating_sub(1)),
            Certificate::Cycle { path, back_to } => {
                write!(f, " (cycle: state {} repeats state {back_to})", path.len().saturating_sub(1))
            }
            Certificate::Frontier { depth } => write!(f, " (fuel exhausted at depth {depth}, {} states)", self.explored),
        }
    }
}

/// One reduction step from every cut of `p`, in conjunct order; each entry
/// pairs the fired cut with its reduct. Head normal forms, `Omega` and the
/// daimon have no successors.
pub fn step(p: &Design, defs: &DefSystem) -> Vec<(Design, Design)> {
    let Some(items) = p.expose_pos(defs) else { return Vec::new() };
    items
        .into_iter()
        .filter_map(|s| {
            let reduct = explore::fire(&s, defs)?;
            Some((s.into_design(), reduct))
        })
        .collect()
}

/// Exhaustive evaluation of a closed positive design.
pub fn evaluate_closed(p: &Design, defs: &DefSystem, fuel: usize) -> Result<EvalOutcome, NormalizeError> {
    if p.polarity(defs) != Some(Polarity::Positive) {
        return Err(NormalizeError::NotPositive);
    }
    let fv = p.free_vars();
    if !fv.is_empty() {
        return Err(NormalizeError::Open(fv.into_iter().collect()));
    }
    Ok(Explorer::new(defs, fuel).evaluate(p))
}

/// `p ⊥ n`: the evaluation of `p[n/x0]`. `p` must be standard with no free
/// variable but `x0`, `n` standard and closed.
pub fn orthogonal(p: &Design, n: &Design, defs: &DefSystem, fuel: usize) -> Result<EvalOutcome, NormalizeError> {
    check_atomic(p, n, defs)?;
    let bound = substitute(p, &BTreeMap::from([(Var::x0(), n.clone())]), defs)?;
    evaluate_closed(&bound, defs, fuel)
}

/// The evaluation of `p[n/x0]` without the atomicity conditions, for
/// tests whose designs contain cuts after substitution.
pub fn interact(p: &Design, n: &Design, defs: &DefSystem, fuel: usize) -> Result<EvalOutcome, NormalizeError> {
    let bound = substitute(p, &BTreeMap::from([(Var::x0(), n.clone())]), defs)?;
    evaluate_closed(&bound, defs, fuel)
}

pub(crate) fn check_atomic(p: &Design, n: &Design, defs: &DefSystem) -> Result<(), NormalizeError> {
    if p.polarity(defs) != Some(Polarity::Positive) {
        return Err(NormalizeError::NotAtomic("the first design must be positive".into()));
    }
    if n.polarity(defs) != Some(Polarity::Negative) {
        return Err(NormalizeError::NotAtomic("the second design must be negative".into()));
    }
    if let Some(v) = p.free_vars().into_iter().find(|v| *v != Var::x0()) {
        return Err(NormalizeError::NotAtomic(format!("positive design has free variable `{v}` other than x0")));
    }
    if !n.is_closed() {
        return Err(NormalizeError::NotAtomic("negative design is not closed".into()));
    }
    if !classify(p, defs).standard {
        return Err(NormalizeError::NotAtomic("positive design is not standard".into()));
    }
    if !classify(n, defs).standard {
        return Err(NormalizeError::NotAtomic("negative design is not standard".into()));
    }
    Ok(())
}
