use std::collections::{BTreeSet, HashMap, HashSet};

use super::canon::{canonical_key, free_vars_ordered, key_with_map};
use super::{Branch, Design, DefSystem, Name, Var};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Code {
    Free(Var),
    Bound(usize),
}

type Env = HashMap<Var, Code>;

fn lookup(env: &Env, v: &Var) -> Code {
    env.get(v).cloned().unwrap_or_else(|| Code::Free(v.clone()))
}

/// Design equivalence: alpha-equivalence taken hereditarily, with
/// conjunctions compared as sets. Reference-free designs are compared by
/// canonical key; otherwise a bisimulation over unfolding states is run.
pub fn equiv(d: &Design, e: &Design, defs: &DefSystem) -> bool {
    if !d.contains_ref() && !e.contains_ref() {
        return canonical_key(d) == canonical_key(e);
    }
    let mut b = Bisim { defs, assumed: HashSet::new(), next: 0 };
    b.eq(d, &Env::new(), e, &Env::new())
}

struct Bisim<'a> {
    defs: &'a DefSystem,
    assumed: HashSet<String>,
    next: usize,
}

impl Bisim<'_> {
    fn state_key(&self, d: &Design, rho: &Env, e: &Design, tau: &Env) -> String {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut code_str = |c: Code| match c {
            Code::Free(v) => format!("{v}"),
            Code::Bound(k) => {
                let n = renumber.len();
                format!("%{}", renumber.entry(k).or_insert(n))
            }
        };
        let left: HashMap<Var, String> =
            free_vars_ordered(d).into_iter().map(|v| (v.clone(), code_str(lookup(rho, &v)))).collect();
        let right: HashMap<Var, String> =
            free_vars_ordered(e).into_iter().map(|v| (v.clone(), code_str(lookup(tau, &v)))).collect();
        format!("{}~{}", key_with_map(d, &left), key_with_map(e, &right))
    }

    fn unfold(&self, d: &Design, env: &Env) -> Option<(Design, Env)> {
        let Design::Ref(id, args) = d else { return None };
        let def = self.defs.get(id)?;
        let inner: Env = def.params.iter().cloned().zip(args.iter().map(|a| lookup(env, a))).collect();
        Some((def.body.clone(), inner))
    }

    /// Flattens a positive design into predesigns with their environments.
    fn items(&self, d: &Design, env: &Env) -> Option<Vec<(Design, Env)>> {
        let mut out = Vec::new();
        let mut todo = vec![(d.clone(), env.clone())];
        while let Some((d, env)) = todo.pop() {
            match &d {
                Design::Omega => return None,
                Design::Conj(xs) => todo.extend(xs.iter().map(|x| (x.clone(), env.clone()))),
                Design::Pred(_) => out.push((d, env)),
                Design::Ref(..) => todo.push(self.unfold(&d, &env)?),
                Design::Var(_) | Design::Sum(_) => return None,
            }
        }
        Some(out)
    }

    fn eq(&mut self, d: &Design, rho: &Env, e: &Design, tau: &Env) -> bool {
        if matches!(d, Design::Ref(..)) || matches!(e, Design::Ref(..)) {
            let key = self.state_key(d, rho, e, tau);
            if !self.assumed.insert(key) {
                return true;
            }
            let (d2, rho2) = self.unfold(d, rho).unwrap_or_else(|| (d.clone(), rho.clone()));
            let (e2, tau2) = self.unfold(e, tau).unwrap_or_else(|| (e.clone(), tau.clone()));
            return self.eq(&d2, &rho2, &e2, &tau2);
        }
        match (d, e) {
            (Design::Var(x), Design::Var(y)) => lookup(rho, x) == lookup(tau, y),
            (Design::Sum(a), Design::Sum(b)) => {
                let names: BTreeSet<&Name> = a.keys().chain(b.keys()).collect();
                let omega = Branch::new(Vec::new(), Design::Omega);
                for name in names {
                    let ba = a.get(name).unwrap_or(&omega);
                    let bb = b.get(name).unwrap_or(&omega);
                    let mut rho2 = rho.clone();
                    let mut tau2 = tau.clone();
                    if a.contains_key(name) && b.contains_key(name) {
                        if ba.vars.len() != bb.vars.len() {
                            return false;
                        }
                        for (x, y) in ba.vars.iter().zip(&bb.vars) {
                            let c = Code::Bound(self.next);
                            self.next += 1;
                            rho2.insert(x.clone(), c.clone());
                            tau2.insert(y.clone(), c);
                        }
                    } else {
                        // Binders of the present side only matter if the body is not Omega.
                        for x in ba.vars.iter().chain(&bb.vars) {
                            let c = Code::Bound(self.next);
                            self.next += 1;
                            rho2.insert(x.clone(), c.clone());
                            tau2.insert(x.clone(), c);
                        }
                    }
                    if !self.eq(&ba.body, &rho2, &bb.body, &tau2) {
                        return false;
                    }
                }
                true
            }
            (Design::Pred(p), Design::Pred(q)) => {
                p.name == q.name
                    && p.args.len() == q.args.len()
                    && self.eq(&p.head, rho, &q.head, tau)
                    && p.args.iter().zip(&q.args).all(|(x, y)| self.eq(x, rho, y, tau))
            }
            (Design::Omega | Design::Conj(_) | Design::Pred(_), Design::Omega | Design::Conj(_) | Design::Pred(_)) => {
                match (self.items(d, rho), self.items(e, tau)) {
                    (None, None) => true,
                    (Some(xs), Some(ys)) => self.covers(&xs, &ys) && self.covers(&ys, &xs),
                    _ => false,
                }
            }
            _ => false,
        }
    }

    /// Every item of `xs` is equivalent to some item of `ys`.
    fn covers(&mut self, xs: &[(Design, Env)], ys: &[(Design, Env)]) -> bool {
        xs.iter().all(|(x, rx)| {
            ys.iter().any(|(y, ry)| {
                let saved = self.assumed.clone();
                let ok = self.eq(x, rx, y, ry);
                if !ok {
                    self.assumed = saved;
                }
                ok
            })
        })
    }
}
