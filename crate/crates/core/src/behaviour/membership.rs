use std::collections::HashSet;

use crate::design::{substitute, DefSystem, Design, Polarity, Var};
use crate::normalize::{evaluate_closed, interact, EvalOutcome, Verdict};
use crate::proofsys::{enumerate_sized, prove, EnumMode, ProofError, Sequent};

use super::{Behaviour, Context};

/// Largest member size tried when sampling.
const SAMPLE_SIZE: usize = 7;

/// `n ∈ b` for a closed negative proof `n`, by proof search on `n |- b`.
/// Branches outside the connective are ignored.
pub fn member_negative(n: &Design, b: &Behaviour, defs: &DefSystem, fuel: usize) -> Result<bool, ProofError> {
    if b.polarity() != Polarity::Negative {
        return Err(ProofError::Polarity { subject: Polarity::Negative, expected: "negative" });
    }
    let s = Sequent::new(n.clone(), Context::new().with_neg(b.clone()));
    let r = prove(&s, defs, fuel)?;
    r.verdict().ok_or(ProofError::OutOfFuel)
}

/// Members of the negative behaviour `b`, as models, up to `size`.
pub fn negative_members(b: &Behaviour, size: usize) -> Vec<(usize, Design)> {
    enumerate_sized(&Context::new().with_neg(b.clone()), size, EnumMode::Models)
}

/// The ethics of a positive behaviour: `x0 | a<N..>` for every action `a`
/// of its connective, the `N` ranging over models of the argument
/// behaviours, of total size at most `size`, ordered by size then key.
pub fn ethics_members(b: &Behaviour, size: usize) -> Vec<Design> {
    let mut out: Vec<(usize, String, Design)> = Vec::new();
    if b.polarity() != Polarity::Positive || size == 0 {
        return Vec::new();
    }
    for a in b.connective().actions() {
        let lists: Vec<Vec<(usize, Design)>> =
            a.vars.iter().map(|x| negative_members(b.arg_for(x), size - 1)).collect();
        let mut acc = Vec::new();
        pick(&lists, 0, size - 1, &mut acc, &mut |args: &[&(usize, Design)]| {
            let total = 1 + args.iter().map(|(s, _)| s).sum::<usize>();
            let d = Design::on_x0(a.name.clone(), args.iter().map(|(_, d)| d.clone()).collect());
            out.push((total, crate::design::canonical_key(&d), d));
        });
    }
    out.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    out.into_iter().map(|(_, _, d)| d).collect()
}

fn pick<'a>(
    lists: &'a [Vec<(usize, Design)>],
    i: usize,
    budget: usize,
    acc: &mut Vec<&'a (usize, Design)>,
    emit: &mut dyn FnMut(&[&(usize, Design)]),
) {
    if i == lists.len() {
        emit(acc);
        return;
    }
    let reserve = lists.len() - i - 1;
    for item in &lists[i] {
        if item.0 + reserve > budget {
            continue;
        }
        acc.push(item);
        pick(lists, i + 1, budget - item.0, acc, emit);
        acc.pop();
    }
}

/// The first `count` ethics members, growing the size bound as needed.
pub fn ethics_sample(b: &Behaviour, count: usize) -> Vec<Design> {
    let mut last = Vec::new();
    for size in 1..=SAMPLE_SIZE {
        last = ethics_members(b, size);
        if last.len() >= count {
            break;
        }
    }
    last.truncate(count);
    last
}

/// The first `count` members of a negative behaviour.
pub fn negative_sample(b: &Behaviour, count: usize) -> Vec<Design> {
    let mut last = Vec::new();
    for size in 1..=SAMPLE_SIZE {
        last = negative_members(b, size);
        if last.len() >= count {
            break;
        }
    }
    last.truncate(count);
    last.into_iter().map(|(_, d)| d).collect()
}

/// Structural membership: `d` is built as the ethics (positive `b`) or
/// as internal completeness prescribes (negative `b`), recursively, with
/// daimons and conjunctions allowed. Sufficient for membership; a
/// definition met twice along a path is rejected.
pub fn member_by_shape(d: &Design, b: &Behaviour, defs: &DefSystem) -> bool {
    let mut sh = Shape { defs, active: HashSet::new() };
    match b.polarity() {
        Polarity::Negative => d.is_closed() && sh.negative(d, b, &Context::new(), 0),
        Polarity::Positive => {
            let Some(items) = d.expose_pos(defs) else { return false };
            let [p] = items.as_slice() else { return false };
            if p.head_var() != Some(&Var::x0()) {
                return false;
            }
            let Some(a) = b.connective().action(&p.name) else { return false };
            a.vars.len() == p.args.len()
                && a.vars.iter().zip(&p.args).all(|(x, n)| n.is_closed() && sh.negative(n, b.arg_for(x), &Context::new(), 0))
        }
    }
}

const SHAPE_DEPTH: usize = 200;

struct Shape<'a> {
    defs: &'a DefSystem,
    active: HashSet<String>,
}

impl Shape<'_> {
    fn negative(&mut self, n: &Design, b: &Behaviour, ctx: &Context, depth: usize) -> bool {
        if depth > SHAPE_DEPTH {
            return false;
        }
        let key = match n {
            Design::Ref(..) => Some(Sequent::new(n.clone(), ctx.clone().with_neg(b.clone())).state_key().0),
            _ => None,
        };
        if let Some(k) = &key {
            if !self.active.insert(k.clone()) {
                return false;
            }
        }
        let ok = match n.expose_neg(self.defs) {
            Design::Sum(bs) => b.connective().actions().iter().all(|a| {
                let Some(br) = bs.get(&a.name) else { return false };
                if br.vars.len() != a.vars.len() {
                    return false;
                }
                let mut inner = ctx.clone();
                for (v, x) in br.vars.iter().zip(&a.vars) {
                    inner.pos.retain(|(w, _)| w != v);
                    inner.pos.push((v.clone(), b.arg_for(x).clone()));
                }
                self.positive(&br.body, &inner, depth + 1)
            }),
            _ => false,
        };
        if let Some(k) = key {
            self.active.remove(&k);
        }
        ok
    }

    fn positive(&mut self, p: &Design, ctx: &Context, depth: usize) -> bool {
        let Some(items) = p.expose_pos(self.defs) else { return false };
        items.iter().all(|s| {
            let Some(z) = s.head_var() else { return false };
            let Some(bz) = ctx.lookup(z) else { return false };
            let Some(a) = bz.connective().action(&s.name) else { return false };
            a.vars.len() == s.args.len()
                && a.vars.iter().zip(&s.args).all(|(x, m)| self.negative(m, bz.arg_for(x), ctx, depth + 1))
        })
    }
}

/// One test of a sampled entailment check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    /// Counter-designs substituted for the context variables.
    pub counter: Vec<(Var, Design)>,
    /// The positive test design, for a negative subject.
    pub test: Option<Design>,
    pub outcome: EvalOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntailReport {
    pub tested: usize,
    /// `Daimon` when every sample converged, `Omega` at the first refuting
    /// sample, `Unknown` when some sample ran out of fuel.
    pub verdict: Verdict,
    pub failure: Option<Sample>,
}

/// Sampled evidence for `d |= ctx`: `d` with members of the dual
/// behaviours substituted for its variables (and, for a negative `d`,
/// tested against ethics members of the dual of the slot) must converge.
/// A refutation is definite; a pass is evidence only.
pub fn entails_sampled(
    d: &Design,
    ctx: &Context,
    defs: &DefSystem,
    fuel: usize,
    samples: usize,
) -> Result<EntailReport, ProofError> {
    if let Some(v) = d.free_vars().into_iter().find(|v| !ctx.contains(v)) {
        return Err(ProofError::Unbound(v));
    }
    let pools: Vec<Vec<Design>> = ctx.pos.iter().map(|(_, b)| negative_sample(&b.dual(), samples)).collect();
    let tests: Vec<Option<Design>> = match &ctx.neg {
        None => vec![None],
        Some(n) => ethics_sample(&n.dual(), samples).into_iter().map(Some).collect(),
    };
    let mut tuples = index_tuples(&pools.iter().map(Vec::len).collect::<Vec<_>>(), samples);
    if pools.is_empty() {
        tuples = vec![vec![]];
    }
    let mut report = EntailReport { tested: 0, verdict: Verdict::Daimon, failure: None };
    'outer: for t in &tuples {
        let counter: Vec<(Var, Design)> =
            ctx.pos.iter().enumerate().map(|(k, (v, _))| (v.clone(), pools[k][t[k]].clone())).collect();
        let bindings = counter.iter().cloned().collect();
        let inst = substitute(d, &bindings, defs).map_err(|e| ProofError::NotAProof(e.to_string()))?;
        for q in &tests {
            if report.tested >= samples {
                break 'outer;
            }
            let outcome = match q {
                None => evaluate_closed(&inst, defs, fuel),
                Some(q) => interact(q, &inst, defs, fuel),
            }
            .map_err(|e| ProofError::NotAProof(e.to_string()))?;
            report.tested += 1;
            match outcome.verdict {
                Verdict::Daimon => {}
                Verdict::Omega => {
                    report.verdict = Verdict::Omega;
                    report.failure = Some(Sample { counter, test: q.clone(), outcome });
                    break 'outer;
                }
                Verdict::Unknown => {
                    if report.verdict == Verdict::Daimon {
                        report.verdict = Verdict::Unknown;
                        report.failure = Some(Sample { counter: counter.clone(), test: q.clone(), outcome });
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The first `limit` index tuples below `lens`, by increasing index sum.
fn index_tuples(lens: &[usize], limit: usize) -> Vec<Vec<usize>> {
    if lens.iter().any(|&l| l == 0) {
        return Vec::new();
    }
    let max_sum: usize = lens.iter().map(|l| l - 1).sum();
    let mut out = Vec::new();
    for sum in 0..=max_sum {
        let mut cur = Vec::new();
        tuples_with_sum(lens, 0, sum, &mut cur, &mut out, limit);
        if out.len() >= limit {
            break;
        }
    }
    out.truncate(limit);
    out
}

fn tuples_with_sum(lens: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    if i == lens.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for k in 0..lens[i].min(left + 1) {
        cur.push(k);
        tuples_with_sum(lens, i + 1, left - k, cur, out, limit);
        cur.pop();
    }
}

/// Sampled check that a negative design belongs to a negative behaviour:
/// orthogonal to the first `samples` ethics members of the dual.
pub fn orthogonal_to_ethics(
    n: &Design,
    b: &Behaviour,
    defs: &DefSystem,
    fuel: usize,
    samples: usize,
) -> Result<EntailReport, ProofError> {
    entails_sampled(n, &Context::new().with_neg(b.clone()), defs, fuel, samples)
}
