//! Designs: the terms shared by proofs and models.
//!
//! Positive designs are `Omega` or conjunctions of predesigns (the empty
//! conjunction is the daimon); negative designs are variables or partial
//! sums whose absent branches stand for `Omega`. Infinite designs are
//! written with references into a guarded [`DefSystem`].

mod canon;
mod classify;
mod defs;
mod equiv;
mod fax;
mod lattice;
mod names;
mod print;
mod subst;

use std::collections::{BTreeMap, BTreeSet};

pub use canon::{canonical_key, free_vars_ordered, key_with_free_renaming};
pub use classify::{classify, Cardinality, Classification};
pub use defs::{DefSystem, Definition};
pub use equiv::equiv;
pub use fax::fax;
pub use lattice::{big_meet, big_meet_neg, daimon_minus, leq, meet};
pub use names::{DefId, Name, Signature, Var};
pub use print::{render_defs, Printer};
pub use subst::substitute;
pub(crate) use subst::substitute_unchecked;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DesignError {
    #[error("name `{name}` has arity {expected}, used with {found}")]
    Arity { name: Name, expected: usize, found: usize },
    #[error("unknown name `{0}`")]
    UnknownName(Name),
    #[error("`x0` is a reserved variable and cannot be a name")]
    ReservedName,
    #[error("duplicate bound variable `{0}`")]
    DuplicateBinder(Var),
    #[error("unbound definition `{0}`")]
    UnboundDef(DefId),
    #[error("definition `{id}` takes {expected} arguments, got {found}")]
    DefArity { id: DefId, expected: usize, found: usize },
    #[error("definition `{0}` is defined twice")]
    DuplicateDef(DefId),
    #[error("definition `{0}` is not guarded")]
    Unguarded(DefId),
    #[error("free variable `{var}` in body of `{id}` is not a parameter")]
    LooseVariable { id: DefId, var: Var },
    #[error("expected a {expected} design, found a {found} one")]
    Polarity { expected: Polarity, found: Polarity },
    #[error("meet is undefined on a variable")]
    MeetVar,
    #[error("the signature is schematic")]
    SchematicSignature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl std::fmt::Display for Polarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Design {
    Omega,
    /// Conjunction of positive designs (predesigns or positive references).
    /// Built through [`Design::conj`] it never has exactly one member.
    Conj(Vec<Design>),
    Pred(Box<Predesign>),
    Var(Var),
    Sum(BTreeMap<Name, Branch>),
    Ref(DefId, Vec<Var>),
}

/// `head | name<args>`; a cut when the head is a sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Predesign {
    pub head: Design,
    pub name: Name,
    pub args: Vec<Design>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Branch {
    pub vars: Vec<Var>,
    pub body: Design,
}

impl Branch {
    pub fn new(vars: Vec<Var>, body: Design) -> Branch {
        Branch { vars, body }
    }
}

impl Design {
    pub fn daimon() -> Design {
        Design::Conj(Vec::new())
    }

    pub fn var(name: &str) -> Design {
        Design::Var(Var::new(name))
    }

    pub fn pred(head: Design, name: Name, args: Vec<Design>) -> Design {
        Design::Pred(Box::new(Predesign { head, name, args }))
    }

    pub fn sum(branches: impl IntoIterator<Item = (Name, Branch)>) -> Design {
        Design::Sum(branches.into_iter().collect())
    }

    pub fn reference(id: &DefId, args: Vec<Var>) -> Design {
        Design::Ref(id.clone(), args)
    }

    /// Canonical conjunction: nested conjunctions are flattened, `Omega`
    /// absorbs, members are sorted by canonical key and deduplicated, and a
    /// single member is returned bare.
    pub fn conj(items: impl IntoIterator<Item = Design>) -> Design {
        let mut flat = Vec::new();
        for d in items {
            match d {
                Design::Omega => return Design::Omega,
                Design::Conj(xs) => flat.extend(xs),
                other => flat.push(other),
            }
        }
        let mut keyed: Vec<(String, Design)> = flat.into_iter().map(|d| (canonical_key(&d), d)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        if keyed.len() == 1 {
            return keyed.pop().unwrap().1;
        }
        Design::Conj(keyed.into_iter().map(|(_, d)| d).collect())
    }

    pub fn is_omega(&self) -> bool {
        matches!(self, Design::Omega)
    }

    pub fn is_daimon(&self) -> bool {
        matches!(self, Design::Conj(xs) if xs.is_empty())
    }

    /// Polarity of the outermost constructor, resolving references.
    pub fn polarity(&self, defs: &DefSystem) -> Option<Polarity> {
        match self {
            Design::Omega | Design::Conj(_) | Design::Pred(_) => Some(Polarity::Positive),
            Design::Var(_) | Design::Sum(_) => Some(Polarity::Negative),
            Design::Ref(id, _) => defs.polarity(id),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        collect_fv(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, v: &Var) -> bool {
        self.free_vars().contains(v)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn contains_ref(&self) -> bool {
        match self {
            Design::Omega | Design::Var(_) => false,
            Design::Ref(..) => true,
            Design::Conj(xs) => xs.iter().any(Design::contains_ref),
            Design::Pred(p) => p.head.contains_ref() || p.args.iter().any(Design::contains_ref),
            Design::Sum(bs) => bs.values().any(|b| b.body.contains_ref()),
        }
    }

    /// Number of constructors, counting references as one node.
    pub fn size(&self) -> usize {
        match self {
            Design::Omega | Design::Var(_) | Design::Ref(..) => 1,
            Design::Conj(xs) => 1 + xs.iter().map(Design::size).sum::<usize>(),
            Design::Pred(p) => 1 + p.head.size() + p.args.iter().map(Design::size).sum::<usize>(),
            Design::Sum(bs) => 1 + bs.values().map(|b| b.body.size()).sum::<usize>(),
        }
    }

    /// Every name used in the design (not following references).
    pub fn names(&self, out: &mut BTreeMap<Name, usize>) {
        match self {
            Design::Omega | Design::Var(_) | Design::Ref(..) => {}
            Design::Conj(xs) => xs.iter().for_each(|x| x.names(out)),
            Design::Pred(p) => {
                out.insert(p.name.clone(), p.args.len());
                p.head.names(out);
                p.args.iter().for_each(|x| x.names(out));
            }
            Design::Sum(bs) => {
                for (n, b) in bs {
                    out.insert(n.clone(), b.vars.len());
                    b.body.names(out);
                }
            }
        }
    }

    /// Unfolds references at the root of a negative design.
    pub fn expose_neg(&self, defs: &DefSystem) -> Design {
        let mut d = self.clone();
        while let Design::Ref(id, args) = &d {
            d = defs.unfold(id, args);
        }
        d
    }

    /// Unfolds a positive design into its conjuncts; `None` for `Omega`.
    /// Every returned design is a `Pred`.
    pub fn expose_pos(&self, defs: &DefSystem) -> Option<Vec<Predesign>> {
        let mut out = Vec::new();
        let mut todo = vec![self.clone()];
        while let Some(d) = todo.pop() {
            match d {
                Design::Omega => return None,
                Design::Conj(xs) => todo.extend(xs.into_iter().rev()),
                Design::Pred(p) => out.push(*p),
                Design::Ref(id, args) => todo.push(defs.unfold(&id, &args)),
                Design::Var(_) | Design::Sum(_) => {}
            }
        }
        Some(out)
    }

    /// The design `x0 | name<args>`.
    pub fn on_x0(name: Name, args: Vec<Design>) -> Design {
        Design::pred(Design::Var(Var::x0()), name, args)
    }
}

impl Predesign {
    pub fn into_design(self) -> Design {
        Design::Pred(Box::new(self))
    }

    pub fn head_var(&self) -> Option<&Var> {
        match &self.head {
            Design::Var(v) => Some(v),
            _ => None,
        }
    }
}

fn collect_fv(d: &Design, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    match d {
        Design::Omega => {}
        Design::Var(v) => {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        }
        Design::Ref(_, args) => {
            for v in args {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
        }
        Design::Conj(xs) => xs.iter().for_each(|x| collect_fv(x, bound, out)),
        Design::Pred(p) => {
            collect_fv(&p.head, bound, out);
            p.args.iter().for_each(|x| collect_fv(x, bound, out));
        }
        Design::Sum(bs) => {
            for b in bs.values() {
                let n = bound.len();
                bound.extend(b.vars.iter().cloned());
                collect_fv(&b.body, bound, out);
                bound.truncate(n);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hnf(x: &str, a: &str) -> Design {
        Design::pred(Design::var(x), Name::new(a), vec![])
    }

    #[test]
    fn conj_canonical() {
        let s = hnf("x", "a");
        assert_eq!(Design::conj(vec![s.clone()]), s);
        assert_eq!(Design::conj(vec![s.clone(), s.clone()]), s);
        assert!(Design::conj(vec![]).is_daimon());
        assert!(Design::conj(vec![s.clone(), Design::Omega]).is_omega());
        let t = hnf("y", "a");
        assert_eq!(Design::conj(vec![s.clone(), t.clone()]), Design::conj(vec![t, s]));
    }

    #[test]
    fn free_variables() {
        let d = Design::sum([(Name::new("a"), Branch::new(vec![Var::new("x")], Design::pred(Design::var("x"), Name::new("b"), vec![Design::var("y")])))]);
        assert_eq!(d.free_vars().into_iter().collect::<Vec<_>>(), vec![Var::new("y")]);
    }
}
