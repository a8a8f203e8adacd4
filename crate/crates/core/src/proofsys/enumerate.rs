use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use crate::behaviour::{fresh_like, Behaviour, Context};
use crate::design::{canonical_key, Branch, DefSystem, Design, Var};

use super::{prove, Derivation, ProofResult, Sequent};

/// `Proofs` inverts the two rule schemas; `Models` also allows the daimon
/// (one node) and conjunctions of distinct head normal forms (the sum of
/// their sizes), keeping every predesign linear.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumMode {
    Proofs,
    Models,
}

/// Every subject of size at most `size` derivable in `ctx` (counting one
/// per rule instance, and per daimon in `Models` mode), ordered by size
/// then canonical key, one per equivalence class. Abstractions carry only
/// the branches of their connective.
pub fn enumerate_members(ctx: &Context, size: usize, mode: EnumMode) -> Vec<Design> {
    enumerate_sized(ctx, size, mode).into_iter().map(|(_, d)| d).collect()
}

/// As [`enumerate_members`], each design paired with its size.
pub fn enumerate_sized(ctx: &Context, size: usize, mode: EnumMode) -> Vec<(usize, Design)> {
    let mut e = Enumerator { mode, memo: HashMap::new() };
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for s in 1..=size {
        let mut level: Vec<(String, Design)> =
            e.level(ctx, s).iter().map(|d| (canonical_key(d), d.clone())).collect();
        level.sort_by(|a, b| a.0.cmp(&b.0));
        for (k, d) in level {
            if seen.insert(k) {
                out.push((s, d));
            }
        }
    }
    out
}

/// Proofs of `ctx` with at most `size` rule instances, with their
/// derivations.
pub fn enumerate_proofs(ctx: &Context, size: usize) -> Vec<(Design, Derivation)> {
    let defs = DefSystem::new();
    enumerate_members(ctx, size, EnumMode::Proofs)
        .into_iter()
        .filter_map(|d| match prove(&Sequent::new(d.clone(), ctx.clone()), &defs, 10 * size + 10) {
            Ok(ProofResult::Derived(der)) => Some((d, der)),
            _ => None,
        })
        .collect()
}

struct Enumerator {
    mode: EnumMode,
    memo: HashMap<(String, usize), Rc<Vec<Design>>>,
}

fn ctx_key(ctx: &Context) -> String {
    let mut k = String::new();
    for (v, b) in &ctx.pos {
        k.push_str(v.as_str());
        k.push(':');
        k.push_str(b.key());
        k.push(',');
    }
    if let Some(n) = &ctx.neg {
        k.push('|');
        k.push_str(n.key());
    }
    k
}

/// Ways to write `total` as an ordered sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < parts {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl Enumerator {
    /// Subjects of exactly `size`.
    fn level(&mut self, ctx: &Context, size: usize) -> Rc<Vec<Design>> {
        let key = (ctx_key(ctx), size);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let out = match &ctx.neg {
            Some(n) => self.negative(ctx, n, size),
            None => self.positive(ctx, size),
        };
        let out = Rc::new(out);
        self.memo.insert(key, out.clone());
        out
    }

    fn negative(&mut self, ctx: &Context, neg: &Behaviour, size: usize) -> Vec<Design> {
        let actions = neg.connective().actions();
        let mut per_action: Vec<(Vec<Var>, Context)> = Vec::new();
        for a in actions {
            let mut chosen: Vec<Var> = Vec::new();
            for x in &a.vars {
                let w = fresh_like(x, &|v: &Var| ctx.contains(v) || chosen.contains(v));
                chosen.push(w);
            }
            let mut inner = Context { pos: ctx.pos.clone(), neg: None };
            for (x, w) in a.vars.iter().zip(&chosen) {
                inner.pos.push((w.clone(), neg.arg_for(x).clone()));
            }
            per_action.push((chosen, inner));
        }
        let mut out = Vec::new();
        for comp in compositions(size - 1, actions.len()) {
            let bodies: Vec<Rc<Vec<Design>>> =
                per_action.iter().zip(&comp).map(|((_, c), &s)| self.level(c, s)).collect();
            for pick in product(&bodies) {
                let branches = actions
                    .iter()
                    .zip(&per_action)
                    .zip(pick)
                    .map(|((a, (vars, _)), body)| (a.name.clone(), Branch::new(vars.clone(), body)));
                out.push(Design::sum(branches));
            }
        }
        out
    }

    fn hnfs(&mut self, ctx: &Context, size: usize) -> Vec<Design> {
        let mut out = Vec::new();
        for (z, b) in &ctx.pos {
            for a in b.connective().actions() {
                let arg_ctx: Vec<Context> =
                    a.vars.iter().map(|x| ctx.clone().with_neg(b.arg_for(x).clone())).collect();
                for comp in compositions(size - 1, a.vars.len()) {
                    let args: Vec<Rc<Vec<Design>>> =
                        arg_ctx.iter().zip(&comp).map(|(c, &s)| self.level(c, s)).collect();
                    for pick in product(&args) {
                        if self.mode == EnumMode::Models && !linear_args(z, &pick) {
                            continue;
                        }
                        out.push(Design::pred(Design::Var(z.clone()), a.name.clone(), pick));
                    }
                }
            }
        }
        out
    }

    fn positive(&mut self, ctx: &Context, size: usize) -> Vec<Design> {
        let mut out = self.hnfs(ctx, size);
        if self.mode == EnumMode::Models {
            if size == 1 {
                out.push(Design::daimon());
            }
            // Conjunctions: strictly increasing sequences of distinct head
            // normal forms, ordered by (size, key).
            let mut pool: Vec<(usize, String, Design)> = Vec::new();
            for s in 1..size {
                for h in self.hnfs(ctx, s) {
                    pool.push((s, canonical_key(&h), h));
                }
            }
            pool.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
            pool.dedup_by(|a, b| a.1 == b.1);
            let mut acc = Vec::new();
            conj_sets(&pool, 0, size, &mut acc, &mut out);
        }
        out
    }
}

fn conj_sets(pool: &[(usize, String, Design)], from: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<Design>) {
    if left == 0 {
        if acc.len() >= 2 {
            out.push(Design::conj(acc.iter().map(|&i| pool[i].2.clone())));
        }
        return;
    }
    for i in from..pool.len() {
        if pool[i].0 > left {
            break;
        }
        acc.push(i);
        conj_sets(pool, i + 1, left - pool[i].0, acc, out);
        acc.pop();
    }
}

fn linear_args(head: &Var, args: &[Design]) -> bool {
    let mut used: BTreeMap<Var, ()> = BTreeMap::new();
    used.insert(head.clone(), ());
    for a in args {
        for v in a.free_vars() {
            if used.insert(v, ()).is_some() {
                return false;
            }
        }
    }
    true
}

/// Cartesian product of the lists, in lexicographic order.
fn product(lists: &[Rc<Vec<Design>>]) -> Vec<Vec<Design>> {
    let mut out: Vec<Vec<Design>> = vec![vec![]];
    for l in lists {
        let mut next = Vec::with_capacity(out.len() * l.len());
        for prefix in &out {
            for d in l.iter() {
                let mut p = prefix.clone();
                p.push(d.clone());
                next.push(p);
            }
        }
        out = next;
        if out.is_empty() {
            break;
        }
    }
    out
}
