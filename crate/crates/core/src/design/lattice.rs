use std::collections::BTreeMap;

use super::subst::substitute_unchecked;
use super::{equiv, Branch, Design, DesignError, DefSystem, Polarity, Signature, Var};

fn polarity_of(d: &Design, defs: &DefSystem) -> Result<Polarity, DesignError> {
    match d.expose_neg(defs) {
        Design::Var(_) => Err(DesignError::MeetVar),
        Design::Sum(_) => Ok(Polarity::Negative),
        _ => Ok(Polarity::Positive),
    }
}

/// Binary meet: conjunction of positive designs, branchwise meet of
/// abstractions (a name survives only if present on both sides).
pub fn meet(p: &Design, q: &Design, defs: &DefSystem) -> Result<Design, DesignError> {
    let (pp, pq) = (polarity_of(p, defs)?, polarity_of(q, defs)?);
    if pp != pq {
        return Err(DesignError::Polarity { expected: pp, found: pq });
    }
    match pp {
        Polarity::Positive => {
            let (Some(xs), Some(ys)) = (p.expose_pos(defs), q.expose_pos(defs)) else {
                return Ok(Design::Omega);
            };
            Ok(Design::conj(xs.into_iter().chain(ys).map(|s| s.into_design())))
        }
        Polarity::Negative => {
            let (Design::Sum(a), Design::Sum(b)) = (p.expose_neg(defs), q.expose_neg(defs)) else {
                unreachable!("polarity_of checked the shape")
            };
            let mut out = BTreeMap::new();
            for (name, ba) in &a {
                let Some(bb) = b.get(name) else { continue };
                let (vars, left, right) = align(ba, bb, defs);
                out.insert(name.clone(), Branch::new(vars, meet(&left, &right, defs)?));
            }
            Ok(Design::Sum(out))
        }
    }
}

/// Renames two branches of the same name onto one binder vector.
fn align(a: &Branch, b: &Branch, defs: &DefSystem) -> (Vec<Var>, Design, Design) {
    if a.vars == b.vars {
        return (a.vars.clone(), a.body.clone(), b.body.clone());
    }
    let b_fv = b.body.free_vars();
    let clash = a.vars.iter().any(|v| b_fv.contains(v) && !b.vars.contains(v));
    if !clash {
        let map: BTreeMap<Var, Design> =
            b.vars.iter().cloned().zip(a.vars.iter().cloned().map(Design::Var)).collect();
        return (a.vars.clone(), a.body.clone(), substitute_unchecked(&b.body, &map, defs));
    }
    let fresh: Vec<Var> = a.vars.iter().map(|_| defs.fresh_var()).collect();
    let ma: BTreeMap<Var, Design> = a.vars.iter().cloned().zip(fresh.iter().cloned().map(Design::Var)).collect();
    let mb: BTreeMap<Var, Design> = b.vars.iter().cloned().zip(fresh.iter().cloned().map(Design::Var)).collect();
    (fresh, substitute_unchecked(&a.body, &ma, defs), substitute_unchecked(&b.body, &mb, defs))
}

/// Meet of a set of positive designs or of a nonempty set of abstractions;
/// the empty meet is the daimon.
pub fn big_meet(xs: &[Design], defs: &DefSystem) -> Result<Design, DesignError> {
    let Some((first, rest)) = xs.split_first() else {
        return Ok(Design::daimon());
    };
    let mut acc = first.clone();
    if let Design::Ref(..) = acc {
        if polarity_of(&acc, defs)? == Polarity::Positive {
            acc = match acc.expose_pos(defs) {
                Some(items) => Design::conj(items.into_iter().map(|s| s.into_design())),
                None => Design::Omega,
            };
        }
    }
    polarity_of(&acc, defs)?;
    for x in rest {
        acc = meet(&acc, x, defs)?;
    }
    Ok(acc)
}

/// Meet of abstractions; the empty meet is the negative daimon over `sig`.
pub fn big_meet_neg(xs: &[Design], sig: &Signature, defs: &DefSystem) -> Result<Design, DesignError> {
    if xs.is_empty() {
        return daimon_minus(sig);
    }
    big_meet(xs, defs)
}

/// The abstraction with a daimon branch for every name of the signature.
pub fn daimon_minus(sig: &Signature) -> Result<Design, DesignError> {
    if sig.is_schematic() && sig.is_empty() {
        return Err(DesignError::SchematicSignature);
    }
    Ok(Design::Sum(
        sig.names()
            .map(|(n, a)| {
                let vars = (1..=a).map(|i| Var::new(&format!("y{i}"))).collect();
                (n.clone(), Branch::new(vars, Design::daimon()))
            })
            .collect(),
    ))
}

/// `p <= q` iff `p` is `Omega` or every conjunct of `q` is a conjunct of `p`.
pub fn leq(p: &Design, q: &Design, defs: &DefSystem) -> Result<bool, DesignError> {
    for d in [p, q] {
        let pol = d.polarity(defs);
        if pol != Some(Polarity::Positive) {
            return Err(DesignError::Polarity { expected: Polarity::Positive, found: pol.unwrap_or(Polarity::Negative) });
        }
    }
    let Some(ps) = p.expose_pos(defs) else { return Ok(true) };
    let Some(qs) = q.expose_pos(defs) else { return Ok(false) };
    let ps: Vec<Design> = ps.into_iter().map(|s| s.into_design()).collect();
    Ok(qs.into_iter().all(|t| {
        let t = t.into_design();
        ps.iter().any(|s| equiv(s, &t, defs))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Name;

    fn hnf(x: &str, a: &str) -> Design {
        Design::pred(Design::var(x), Name::new(a), vec![])
    }

    #[test]
    fn empty_meet_is_daimon() {
        assert!(big_meet(&[], &DefSystem::new()).unwrap().is_daimon());
    }

    #[test]
    fn omega_absorbs() {
        let defs = DefSystem::new();
        assert!(meet(&Design::Omega, &hnf("x", "a"), &defs).unwrap().is_omega());
    }

    #[test]
    fn singleton_meet() {
        let defs = DefSystem::new();
        let s = hnf("x", "a");
        assert_eq!(big_meet(&[s.clone()], &defs).unwrap(), s);
        let abs = Design::sum([(Name::new("a"), Branch::new(vec![], s))]);
        assert_eq!(big_meet(&[abs.clone()], &defs).unwrap(), abs);
    }

    #[test]
    fn abstraction_meet_aligns_binders() {
        let defs = DefSystem::new();
        let a = Design::sum([
            (Name::new("a"), Branch::new(vec![Var::new("x")], hnf("x", "b"))),
            (Name::new("c"), Branch::new(vec![], Design::daimon())),
        ]);
        let b = Design::sum([(Name::new("a"), Branch::new(vec![Var::new("y")], hnf("y", "d")))]);
        let m = meet(&a, &b, &defs).unwrap();
        let expected = Design::sum([(
            Name::new("a"),
            Branch::new(vec![Var::new("x")], Design::conj(vec![hnf("x", "b"), hnf("x", "d")])),
        )]);
        assert!(equiv(&m, &expected, &defs));
    }

    #[test]
    fn meet_of_variable_fails() {
        assert_eq!(meet(&Design::var("x"), &Design::var("x"), &DefSystem::new()), Err(DesignError::MeetVar));
    }

    #[test]
    fn order() {
        let defs = DefSystem::new();
        let (s, t) = (hnf("x", "a"), hnf("x", "b"));
        assert!(leq(&Design::Omega, &s, &defs).unwrap());
        assert!(leq(&s, &Design::daimon(), &defs).unwrap());
        assert!(!leq(&s, &Design::conj(vec![s.clone(), t.clone()]), &defs).unwrap());
        assert!(leq(&Design::conj(vec![s.clone(), t]), &s, &defs).unwrap());
    }
}
