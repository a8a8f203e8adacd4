use std::collections::{BTreeSet, HashMap};

use super::defs::refs_of;
use super::{Design, DefId, DefSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub total: bool,
    pub closed: bool,
    pub linear: bool,
    pub deterministic: bool,
    pub cut_free: bool,
    pub identity_free: bool,
    pub standard: bool,
    pub is_proof: bool,
    pub is_model: bool,
    /// Number of positive-action occurrences.
    pub cardinality: Cardinality,
}

#[derive(Default)]
struct Flags {
    linear: bool,
    deterministic: bool,
    cut_free: bool,
    identity_free: bool,
}

/// Structural classification, computed over the design and every
/// definition reachable from it.
pub fn classify(d: &Design, defs: &DefSystem) -> Classification {
    let reachable = defs.reachable(&[d]);
    let mut flags = Flags { linear: true, deterministic: true, cut_free: true, identity_free: true };
    scan(d, defs, &mut flags);
    for id in &reachable {
        if let Some(def) = defs.get(id) {
            scan(&def.body, defs, &mut flags);
        }
    }
    let total = d.expose_pos(defs).is_some() || d.polarity(defs) != Some(super::Polarity::Positive);
    let standard = total && flags.cut_free && flags.identity_free;
    Classification {
        total,
        closed: d.is_closed(),
        linear: flags.linear,
        deterministic: flags.deterministic,
        cut_free: flags.cut_free,
        identity_free: flags.identity_free,
        standard,
        is_proof: standard && flags.deterministic && !has_conj(d, defs, &reachable),
        is_model: standard && flags.linear,
        cardinality: cardinality(d, defs, &reachable),
    }
}

fn scan(d: &Design, defs: &DefSystem, flags: &mut Flags) {
    match d {
        Design::Omega | Design::Var(_) | Design::Ref(..) => {}
        Design::Conj(xs) => {
            if xs.len() > 1 {
                flags.deterministic = false;
            }
            xs.iter().for_each(|x| scan(x, defs, flags));
        }
        Design::Sum(bs) => bs.values().for_each(|b| scan(&b.body, defs, flags)),
        Design::Pred(p) => {
            if matches!(p.head.expose_neg(defs), Design::Sum(_)) {
                flags.cut_free = false;
            }
            let mut seen: BTreeSet<_> = p.head.free_vars();
            for a in &p.args {
                if matches!(a.expose_neg(defs), Design::Var(_)) {
                    flags.identity_free = false;
                }
                let fv = a.free_vars();
                if !fv.is_disjoint(&seen) {
                    flags.linear = false;
                }
                seen.extend(fv);
            }
            scan(&p.head, defs, flags);
            p.args.iter().for_each(|a| scan(a, defs, flags));
        }
    }
}

fn has_conj(d: &Design, defs: &DefSystem, reachable: &[DefId]) -> bool {
    fn walk(d: &Design) -> bool {
        match d {
            Design::Omega | Design::Var(_) | Design::Ref(..) => false,
            Design::Conj(_) => true,
            Design::Sum(bs) => bs.values().any(|b| walk(&b.body)),
            Design::Pred(p) => walk(&p.head) || p.args.iter().any(walk),
        }
    }
    walk(d) || reachable.iter().any(|id| defs.get(id).is_some_and(|def| walk(&def.body)))
}

fn cardinality(d: &Design, defs: &DefSystem, reachable: &[DefId]) -> Cardinality {
    // Guardedness puts a predesign on every cycle, so a reachable cycle
    // means infinitely many positive actions.
    let mut colour: HashMap<DefId, u8> = HashMap::new();
    fn cyclic(id: &DefId, defs: &DefSystem, colour: &mut HashMap<DefId, u8>) -> bool {
        match colour.get(id) {
            Some(1) => return true,
            Some(_) => return false,
            None => {}
        }
        colour.insert(id.clone(), 1);
        let mut next = Vec::new();
        if let Some(def) = defs.get(id) {
            refs_of(&def.body, &mut next);
        }
        let found = next.iter().any(|n| cyclic(n, defs, colour));
        colour.insert(id.clone(), 2);
        found
    }
    if reachable.iter().any(|id| cyclic(id, defs, &mut colour)) {
        return Cardinality::Infinite;
    }
    fn count(d: &Design, defs: &DefSystem, memo: &mut HashMap<DefId, usize>) -> usize {
        match d {
            Design::Omega | Design::Var(_) => 0,
            Design::Ref(id, _) => {
                if let Some(&n) = memo.get(id) {
                    return n;
                }
                let n = defs.get(id).map(|def| count(&def.body, defs, memo)).unwrap_or(0);
                memo.insert(id.clone(), n);
                n
            }
            Design::Conj(xs) => xs.iter().map(|x| count(x, defs, memo)).sum(),
            Design::Sum(bs) => bs.values().map(|b| count(&b.body, defs, memo)).sum(),
            Design::Pred(p) => 1 + count(&p.head, defs, memo) + p.args.iter().map(|a| count(a, defs, memo)).sum::<usize>(),
        }
    }
    Cardinality::Finite(count(d, defs, &mut HashMap::new()))
}
