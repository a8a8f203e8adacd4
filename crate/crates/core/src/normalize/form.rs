use std::collections::BTreeMap;
use std::fmt;

use crate::design::{canonical_key, Branch, DefId, Design, DefSystem, Name, Polarity, Printer, Var};

use super::explore::{Explorer, Reach};

/// A normal form computed to a bounded depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalForm {
    Omega,
    /// Evaluation of this position ran out of fuel.
    Unknown,
    /// The depth bound was reached.
    Truncated,
    /// Conjunction of head normal forms; empty for the daimon.
    Conj(Vec<NfHead>),
    Var(Var),
    Sum(BTreeMap<Name, (Vec<Var>, NormalForm)>),
}

/// `x | a<args>`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfHead {
    pub var: Var,
    pub name: Name,
    pub args: Vec<NormalForm>,
}

const TRUNCATED: &str = "...";
const UNKNOWN: &str = "...?";

/// The normal form of `d`, expanded `depth` constructor layers deep (each
/// conjunction and each abstraction is one layer).
pub fn normal_form(d: &Design, defs: &DefSystem, fuel: usize, depth: usize) -> NormalForm {
    let mut ex = Explorer::new(defs, fuel);
    expand(&mut ex, d, depth)
}

pub(crate) fn expand(ex: &mut Explorer<'_>, d: &Design, depth: usize) -> NormalForm {
    let defs = ex.defs();
    if d.polarity(defs) == Some(Polarity::Negative) {
        return match d.expose_neg(defs) {
            Design::Var(v) => NormalForm::Var(v),
            Design::Sum(_) if depth == 0 => NormalForm::Truncated,
            Design::Sum(bs) => NormalForm::Sum(
                bs.into_iter().map(|(n, b)| (n, (b.vars, expand(ex, &b.body, depth - 1)))).collect(),
            ),
            _ => NormalForm::Omega,
        };
    }
    if depth == 0 {
        return NormalForm::Truncated;
    }
    match ex.reach(d) {
        Reach::Omega => NormalForm::Omega,
        Reach::Unknown { .. } => NormalForm::Unknown,
        Reach::Converges(hnfs) => {
            let mut heads = Vec::new();
            for h in hnfs.values() {
                let Design::Pred(p) = h else { continue };
                let Design::Var(var) = p.head.expose_neg(defs) else { continue };
                let args = p.args.iter().map(|a| expand(ex, a, depth - 1)).collect();
                heads.push(NfHead { var, name: p.name.clone(), args });
            }
            NormalForm::Conj(heads)
        }
    }
}

impl NormalForm {
    /// True when no marker occurs.
    pub fn is_complete(&self) -> bool {
        match self {
            NormalForm::Unknown | NormalForm::Truncated => false,
            NormalForm::Omega | NormalForm::Var(_) => true,
            NormalForm::Conj(hs) => hs.iter().all(|h| h.args.iter().all(NormalForm::is_complete)),
            NormalForm::Sum(bs) => bs.values().all(|(_, b)| b.is_complete()),
        }
    }

    pub fn has_unknown(&self) -> bool {
        match self {
            NormalForm::Unknown => true,
            NormalForm::Truncated | NormalForm::Omega | NormalForm::Var(_) => false,
            NormalForm::Conj(hs) => hs.iter().any(|h| h.args.iter().any(NormalForm::has_unknown)),
            NormalForm::Sum(bs) => bs.values().any(|(_, b)| b.has_unknown()),
        }
    }

    pub fn is_daimon(&self) -> bool {
        matches!(self, NormalForm::Conj(hs) if hs.is_empty())
    }

    /// The design, when complete.
    pub fn to_design(&self) -> Option<Design> {
        self.is_complete().then(|| self.marked())
    }

    /// The design with markers encoded as reserved leaves, so that two
    /// normal forms with markers can still be compared.
    pub fn marked(&self) -> Design {
        match self {
            NormalForm::Omega => Design::Omega,
            NormalForm::Unknown => Design::Ref(DefId::new(UNKNOWN), vec![]),
            NormalForm::Truncated => Design::Ref(DefId::new(TRUNCATED), vec![]),
            NormalForm::Var(v) => Design::Var(v.clone()),
            NormalForm::Conj(hs) => Design::conj(
                hs.iter().map(|h| Design::pred(Design::Var(h.var.clone()), h.name.clone(), h.args.iter().map(NormalForm::marked).collect())),
            ),
            NormalForm::Sum(bs) => Design::Sum(
                bs.iter()
                    .filter(|(_, (_, b))| *b != NormalForm::Omega)
                    .map(|(n, (vs, b))| (n.clone(), Branch::new(vs.clone(), b.marked())))
                    .collect(),
            ),
        }
    }

    /// Canonical key of the marked design.
    pub fn key(&self) -> String {
        canonical_key(&self.marked())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.marked();
        f.write_str(&Printer::avoiding([&d]).design(&d))
    }
}
