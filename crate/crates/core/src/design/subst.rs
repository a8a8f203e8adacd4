use std::collections::{BTreeMap, HashMap, HashSet};

use super::canon::{free_vars_ordered, key_with_free_renaming};
use super::defs::Definition;
use super::{Branch, Design, DesignError, DefSystem, Polarity, Predesign, Var};

/// Simultaneous capture-avoiding substitution of negative designs.
///
/// References whose arguments become non-variables are specialized into
/// new definitions, memoized in `defs` by the shape of the arguments.
pub fn substitute(d: &Design, bindings: &BTreeMap<Var, Design>, defs: &DefSystem) -> Result<Design, DesignError> {
    for n in bindings.values() {
        match n.polarity(defs) {
            Some(Polarity::Negative) => {}
            Some(Polarity::Positive) => {
                return Err(DesignError::Polarity { expected: Polarity::Negative, found: Polarity::Positive })
            }
            None => {
                if let Design::Ref(id, _) = n {
                    return Err(DesignError::UnboundDef(id.clone()));
                }
            }
        }
    }
    Ok(substitute_unchecked(d, bindings, defs))
}

pub(crate) fn substitute_unchecked(d: &Design, bindings: &BTreeMap<Var, Design>, defs: &DefSystem) -> Design {
    if bindings.is_empty() {
        return d.clone();
    }
    let mut avoid = HashSet::new();
    for n in bindings.values() {
        avoid.extend(n.free_vars());
    }
    let map: HashMap<Var, Design> = bindings.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    Subst { defs, avoid }.go(d, &map)
}

struct Subst<'a> {
    defs: &'a DefSystem,
    avoid: HashSet<Var>,
}

impl Subst<'_> {
    fn go(&self, d: &Design, map: &HashMap<Var, Design>) -> Design {
        if map.is_empty() {
            return d.clone();
        }
        match d {
            Design::Omega => Design::Omega,
            Design::Var(v) => map.get(v).cloned().unwrap_or_else(|| d.clone()),
            Design::Conj(xs) => Design::conj(xs.iter().map(|x| self.go(x, map))),
            Design::Pred(p) => Design::Pred(Box::new(Predesign {
                head: self.go(&p.head, map),
                name: p.name.clone(),
                args: p.args.iter().map(|a| self.go(a, map)).collect(),
            })),
            Design::Sum(bs) => Design::Sum(
                bs.iter()
                    .map(|(n, b)| {
                        let mut inner = map.clone();
                        let mut vars = Vec::with_capacity(b.vars.len());
                        for v in &b.vars {
                            inner.remove(v);
                            if self.avoid.contains(v) {
                                let w = self.defs.fresh_var();
                                inner.insert(v.clone(), Design::Var(w.clone()));
                                vars.push(w);
                            } else {
                                vars.push(v.clone());
                            }
                        }
                        (n.clone(), Branch::new(vars, self.go(&b.body, &inner)))
                    })
                    .collect(),
            ),
            Design::Ref(id, args) => {
                let new_args: Vec<Design> =
                    args.iter().map(|a| map.get(a).cloned().unwrap_or_else(|| Design::Var(a.clone()))).collect();
                let vars: Option<Vec<Var>> = new_args
                    .iter()
                    .map(|a| match a {
                        Design::Var(v) => Some(v.clone()),
                        _ => None,
                    })
                    .collect();
                match vars {
                    Some(vs) => Design::Ref(id.clone(), vs),
                    None => specialize(self.defs, id, new_args),
                }
            }
        }
    }
}

/// `id(args)` where some argument is not a variable: a reference to a
/// derived definition whose parameters are the free variables of `args`.
fn specialize(defs: &DefSystem, id: &super::DefId, args: Vec<Design>) -> Design {
    let packed = Design::Pred(Box::new(Predesign { head: Design::Omega, name: super::Name::new("_"), args: args.clone() }));
    let (shape, _) = key_with_free_renaming(&packed);
    let free = free_vars_ordered(&packed);
    let key = format!("{id}|{shape}");
    if let Some(existing) = defs.memo_get(&key) {
        return Design::Ref(existing, free);
    }
    let def = defs.get(id).unwrap_or_else(|| panic!("unbound definition `{id}`"));
    let new_id = defs.fresh_id(id.as_str());
    let params: Vec<Var> = free.iter().map(|_| defs.fresh_var()).collect();
    defs.memo_reserve(key, new_id.clone(), def.polarity, params.clone());
    let rename: BTreeMap<Var, Design> =
        free.iter().cloned().zip(params.iter().cloned().map(Design::Var)).collect();
    let local_args: Vec<Design> = args.iter().map(|a| substitute_unchecked(a, &rename, defs)).collect();
    let bind: BTreeMap<Var, Design> = def.params.iter().cloned().zip(local_args).collect();
    let body = substitute_unchecked(&def.body, &bind, defs);
    defs.install(new_id.clone(), Definition { params, body, polarity: def.polarity });
    Design::Ref(new_id, free)
}
