//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that the report is always printed;
//! the process fails when any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ludics::behaviour::{
    entails_sampled, Action, Connective, ethics_members, member_by_shape, member_negative, negative_members, negative_sample,
};
use ludics::countermodel::{countermodel, is_cycle, verify_countermodel_membership, verify_defeat, ModelKind};
use ludics::design::{big_meet, classify, equiv, leq, meet, substitute, Branch, Cardinality};
use ludics::llp::{
    circ, bullet, enumerate_strict_sequents, formulas_up_to, isomorphic, prove_llp, prove_llp_syn_direct, Formula,
    Node, StrictSequent,
};
use ludics::normalize::automaton::{Automaton, Tree};
use ludics::normalize::{Certificate, NormalForm};
use ludics::proofsys::{enumerate_proofs, BranchEnd, ProofResult};
use ludics::{
    evaluate_closed, normal_form, orthogonal, parse_design, parse_sequent, prove, step, Behaviour, Context, DefSystem,
    Design, Name, Polarity, Sequent, Signature, Var, Verdict,
};

const FUEL: usize = 20_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn design(text: &str) -> (Design, DefSystem) {
    parse_design(text, &Signature::new()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn nf(d: &Design, defs: &DefSystem, depth: usize) -> NormalForm {
    normal_form(d, defs, FUEL, depth)
}

// ---------------------------------------------------------------------------
// Random finite designs over `a/1`, `b/0`, `c/2`.

mod gen {
    use super::*;

    const NAMES: [(&str, usize); 3] = [("a", 1), ("b", 0), ("c", 2)];

    pub struct Gen {
        pub rng: ChaCha8Rng,
        fresh: usize,
    }

    impl Gen {
        pub fn new(seed: u64) -> Gen {
            Gen { rng: ChaCha8Rng::seed_from_u64(seed), fresh: 0 }
        }

        fn name(&mut self) -> (Name, usize) {
            let (n, k) = NAMES[self.rng.random_range(0..NAMES.len())];
            (Name::new(n), k)
        }

        fn fresh(&mut self) -> Var {
            self.fresh += 1;
            Var::new(&format!("v{}", self.fresh))
        }

        pub fn positive(&mut self, depth: usize, scope: &[Var]) -> Design {
            if depth == 0 {
                return if self.rng.random_bool(0.9) { Design::daimon() } else { Design::Omega };
            }
            match self.rng.random_range(0..20) {
                0..=2 => Design::daimon(),
                3 => Design::Omega,
                4..=9 if !scope.is_empty() => {
                    let head = Design::Var(scope[self.rng.random_range(0..scope.len())].clone());
                    let (n, k) = self.name();
                    let args = (0..k).map(|_| self.negative(depth - 1, scope)).collect();
                    Design::pred(head, n, args)
                }
                4..=16 => {
                    let (n, k) = self.name();
                    let head = self.sum(depth - 1, scope, Some(&n));
                    let args = (0..k).map(|_| self.negative(depth - 1, scope)).collect();
                    Design::pred(head, n, args)
                }
                _ => Design::conj([self.positive(depth - 1, scope), self.positive(depth - 1, scope)]),
            }
        }

        pub fn negative(&mut self, depth: usize, scope: &[Var]) -> Design {
            if depth == 0 || (!scope.is_empty() && self.rng.random_bool(0.3)) {
                return match scope.is_empty() {
                    true => Design::sum([]),
                    false => Design::Var(scope[self.rng.random_range(0..scope.len())].clone()),
                };
            }
            self.sum(depth, scope, None)
        }

        fn sum(&mut self, depth: usize, scope: &[Var], wanted: Option<&Name>) -> Design {
            if depth == 0 {
                return Design::sum([]);
            }
            let mut branches = BTreeMap::new();
            let count = self.rng.random_range(1..=2);
            for i in 0..count {
                let (n, k) = match wanted {
                    Some(w) if i == 0 && self.rng.random_bool(0.85) => {
                        (w.clone(), NAMES.iter().find(|(s, _)| *s == w.as_str()).unwrap().1)
                    }
                    _ => self.name(),
                };
                if branches.contains_key(&n) {
                    continue;
                }
                let vars: Vec<Var> = (0..k).map(|_| self.fresh()).collect();
                let mut inner = scope.to_vec();
                inner.extend(vars.iter().cloned());
                let body = self.positive(depth - 1, &inner);
                branches.insert(n, Branch::new(vars, body));
            }
            Design::Sum(branches)
        }
    }
}

// ---------------------------------------------------------------------------
// 1. Tree automaton.

fn accepted(t: &Tree) -> bool {
    let leaf = Tree::b(Tree::Eps, Tree::Eps);
    match t {
        Tree::A(l, r) => **l == leaf && accepted(r),
        _ => *t == leaf,
    }
}

fn criterion_1() -> Outcome {
    let named = [
        (Tree::a(Tree::leaf_b(), Tree::a(Tree::leaf_b(), Tree::leaf_b())), Verdict::Daimon),
        (Tree::a(Tree::leaf_b(), Tree::leaf_b()), Verdict::Daimon),
        (Tree::b(Tree::a(Tree::Eps, Tree::Eps), Tree::a(Tree::Eps, Tree::Eps)), Verdict::Omega),
    ];
    let automaton = Automaton::new();
    for (t, v) in &named {
        let (d, defs) = automaton.instance(t);
        let got = evaluate_closed(&d, &defs, FUEL).map_err(|e| e.to_string())?.verdict;
        ensure!(got == *v, "{t}: expected {v}, got {got}");
    }
    let (mut total, mut accepting, mut rejected) = (0, 0, 0);
    for n in 0..=7 {
        for t in Tree::all_of_size(n) {
            let (d, defs) = automaton.instance(&t);
            let got = evaluate_closed(&d, &defs, FUEL).map_err(|e| e.to_string())?.verdict;
            let want = if accepted(&t) { Verdict::Daimon } else { Verdict::Omega };
            ensure!(got == want, "{t}: expected {want}, got {got}");
            total += 1;
            if want == Verdict::Daimon {
                accepting += 1;
            } else {
                rejected += 1;
            }
        }
    }
    ensure!(rejected >= 10, "only {rejected} rejected trees");
    Ok(format!("{total} trees of at most 7 nodes, {accepting} accepted, {rejected} rejected"))
}

// ---------------------------------------------------------------------------
// 2. Reduction examples.

fn reducts(text: &str) -> (Vec<Design>, DefSystem) {
    let (p, defs) = design(text);
    (step(&p, &defs).into_iter().map(|(_, r)| r).collect(), defs)
}

fn criterion_2() -> Outcome {
    let (r, _) = reducts("{ a(x) => daimon } | a<{}>");
    ensure!(r.len() == 1 && r[0].is_daimon(), "example 1: {r:?}");
    let (r, _) = reducts("{ b(x) => daimon } | a<{}>");
    ensure!(r.len() == 1 && r[0].is_omega(), "example 2: {r:?}");
    let (r, _) = reducts("/\\{ { a(x) => daimon } | a<{}>, { b(x) => daimon } | a<{}> }");
    ensure!(r.len() == 2 && r.iter().any(Design::is_daimon) && r.iter().any(Design::is_omega), "example 3: {r:?}");

    let text = "{ a(x) => x | a<x> } | a<{ a(x) => x | a<x> }>";
    let (p, defs) = design(text);
    let r = step(&p, &defs);
    ensure!(r.len() == 1 && equiv(&r[0].1, &p, &defs), "example 4 does not reduce to itself");
    let out = evaluate_closed(&p, &defs, FUEL).map_err(|e| e.to_string())?;
    ensure!(out.verdict == Verdict::Omega, "example 4: {out}");
    ensure!(matches!(out.certificate, Certificate::Cycle { .. }), "example 4 not certified by a cycle: {out}");
    ensure!(out.explored <= 3, "example 4 explored {} states", out.explored);

    let q = "{ b(t) => t | d }";
    let text = format!("{{ a(y) => /\\{{ y | b<w>, z | c<{{ e => y | f }}> }} }} | a<{q}>");
    let (p, defs) = design(&text);
    let r = step(&p, &defs);
    let (want, _) = design(&format!("/\\{{ {q} | b<w>, z | c<{{ e => {q} | f }}> }}"));
    ensure!(r.len() == 1 && equiv(&r[0].1, &want, &defs), "example 5, first step: {}", r[0].1);
    let r2 = step(&r[0].1, &defs);
    let (want2, _) = design("w | d");
    ensure!(r2.len() == 1 && equiv(&r2[0].1, &want2, &defs), "example 5, second step: {r2:?}");
    ensure!(step(&want2, &defs).is_empty(), "head normal form reduces");
    Ok(format!("examples 1-5 match; example 4 is a cycle after {} state(s)", out.explored))
}

// ---------------------------------------------------------------------------
// 3. Associativity.

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut g = gen::Gen::new(3);
    let ys: Vec<Var> = (1..=3).map(|i| Var::new(&format!("y{i}"))).collect();
    let x = Var::new("x");
    let defs = DefSystem::new();
    let (mut done, mut interacting) = (0, 0);
    let mut attempts = 0;
    while done < 500 {
        attempts += 1;
        ensure!(attempts < 5000, "could not generate instances");
        let k = g.rng.random_range(1..=3);
        let mut scope = ys[..k].to_vec();
        scope.push(x.clone());
        let depth = g.rng.random_range(2..=5);
        let d = g.positive(depth, &scope);
        let ns: Vec<Design> = (0..k).map(|_| g.negative(3, std::slice::from_ref(&x))).collect();
        let bindings: BTreeMap<Var, Design> = ys[..k].iter().cloned().zip(ns.iter().cloned()).collect();
        let lhs = nf(&substitute(&d, &bindings, &defs).map_err(|e| e.to_string())?, &defs, 6);
        let nd = nf(&d, &defs, 64);
        let nns: Vec<NormalForm> = ns.iter().map(|n| nf(n, &defs, 64)).collect();
        let (Some(nd), Some(nns)) = (nd.to_design(), nns.iter().map(NormalForm::to_design).collect::<Option<Vec<_>>>())
        else {
            return Err(format!("normal form of a finite design incomplete: {d}"));
        };
        let bindings: BTreeMap<Var, Design> = ys[..k].iter().cloned().zip(nns).collect();
        let rhs = nf(&substitute(&nd, &bindings, &defs).map_err(|e| e.to_string())?, &defs, 6);
        ensure!(!lhs.has_unknown() && !rhs.has_unknown(), "fuel exhausted on {d}");
        ensure!(lhs.key() == rhs.key(), "D = {d}\n  left  {lhs}\n  right {rhs}");
        if !step(&substitute(&nd, &bindings, &defs).map_err(|e| e.to_string())?, &defs).is_empty() {
            interacting += 1;
        }
        done += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 60.0, "took {secs:.1}s");
    Ok(format!("{done} random designs agree at depth 6 ({interacting} with cuts after substitution) in {secs:.1}s"))
}

// ---------------------------------------------------------------------------
// 4. Basic facts on reduction and normal forms.

fn conjuncts(d: &Design) -> Vec<Design> {
    match d {
        Design::Conj(xs) => xs.clone(),
        d if d.is_daimon() => vec![],
        d => vec![d.clone()],
    }
}

fn complete(d: &Design, defs: &DefSystem) -> Option<Design> {
    nf(d, defs, 64).to_design()
}

fn criterion_4() -> Outcome {
    let mut g = gen::Gen::new(4);
    let scope = [Var::new("x"), Var::new("z")];
    let defs = DefSystem::new();
    let (mut c1, mut c2, mut c3) = (0, 0, 0);
    let mut attempts = 0;
    while c1 < 500 || c2 < 500 || c3 < 500 {
        attempts += 1;
        ensure!(attempts < 50_000, "could not generate instances ({c1}, {c2}, {c3})");
        let depth = g.rng.random_range(2..=5);
        let q = g.positive(depth, &scope);
        let extra = g.positive(depth, &scope);
        let p = Design::conj(conjuncts(&q).into_iter().chain(conjuncts(&extra)));
        let q_steps = step(&q, &defs);
        if c1 < 500 && !p.is_omega() && !q_steps.is_empty() {
            ensure!(leq(&p, &q, &defs).map_err(|e| e.to_string())?, "generated P is not below Q");
            let p_steps = step(&p, &defs);
            for (_, r) in &q_steps {
                ensure!(p_steps.iter().any(|(_, s)| equiv(r, s, &defs)), "clause 1: {p} misses reduct {r} of {q}");
            }
            c1 += 1;
        }
        if c2 < 500 && !q_steps.is_empty() {
            let np = complete(&q, &defs).ok_or("incomplete normal form")?;
            for (_, r) in &q_steps {
                let nr = complete(r, &defs).ok_or("incomplete normal form")?;
                ensure!(leq(&np, &nr, &defs).map_err(|e| e.to_string())?, "clause 2: [{q}] = {np} not below [{r}] = {nr}");
                if matches!(q, Design::Pred(_)) {
                    ensure!(equiv(&np, &nr, &defs), "clause 2: predesign {q} changes normal form");
                }
            }
            c2 += 1;
        }
        if c3 < 500 {
            let xs: Vec<Design> = (0..g.rng.random_range(1..=3)).map(|_| g.positive(depth, &scope)).collect();
            let whole = complete(&Design::conj(xs.iter().cloned()), &defs).ok_or("incomplete normal form")?;
            let parts = xs.iter().map(|x| complete(x, &defs)).collect::<Option<Vec<_>>>().ok_or("incomplete")?;
            let met = big_meet(&parts, &defs).map_err(|e| e.to_string())?;
            ensure!(equiv(&whole, &met, &defs), "clause 3: {whole} vs {met}");
            c3 += 1;
        }
    }
    Ok(format!("{c1} + {c2} + {c3} instances of the three clauses"))
}

// ---------------------------------------------------------------------------
// 5. Separation.

const SEP_P: &str = "x0 | down<{ up(y) => daimon }>";
const SEP_Q: &str = "x0 | down<{ up(y) => x0 | down<{ up(y) => daimon }> }>";

/// Candidate tests with a flag telling whether `up` is a qualifying
/// component `up(z) => /\{ z | down<M_i> }`.
fn separation_candidates() -> Vec<(String, bool)> {
    let ms = [
        "{}",
        "{ up(u) => daimon }",
        "{ up(u) => u | down<{}> }",
        "{ up(u) => z | down<{}> }",
        "{ * => daimon }",
        "{ up(u) => z | * }",
    ];
    let others = ["", "; * => daimon", "; pi1(v) => daimon"];
    let mut out = Vec::new();
    for extra in others {
        out.push((format!("{{ up(z) => daimon{extra} }}"), true));
        for m in ms {
            out.push((format!("{{ up(z) => z | down<{m}>{extra} }}"), true));
        }
        out.push((format!("{{ up(z) => /\\{{ z | down<{}>, z | down<{}> }}{extra} }}", ms[1], ms[3]), true));
        out.push((format!("{{ up(z) => z | *{extra} }}"), false));
        out.push((format!("{{ up(z) => /\\{{ z | down<{}>, z | * }}{extra} }}", ms[0]), false));
        out.push((format!("{{ up(z) => z | pi1<{{}}>{extra} }}"), false));
        out.push((format!("{{ up(z) => /\\{{ z | *, z | pi2<{{}}> }}{extra} }}"), false));
        if !extra.is_empty() {
            out.push((format!("{{ {} }}", &extra[2..]), false));
        }
    }
    out.push(("{}".into(), false));
    out.push(("{ up(z) => z | down<{ up(u) => daimon }>; * => daimon; pi1(v) => daimon }".into(), true));
    out.push(("{ up(z) => z | down<{ * => daimon; up(u) => daimon }> }".into(), true));
    out.push(("{ up(z) => /\\{ z | down<{}>, z | down<{ * => daimon }>, z | down<{ up(u) => u | down<{}> }> } }".into(), true));
    out.push(("{ up(z) => /\\{ z | down<{}>, z | *, z | down<{ * => daimon }> } }".into(), false));
    out.push(("{ * => daimon; pi1(v) => daimon; pi2(v) => daimon }".into(), false));
    out.push(("{ up(z) => z | pi1<{}> }".into(), false));
    out.push(("{ up(z) => z | down<{ up(u) => u | * }> }".into(), true));
    out.push(("{ up(z) => z | down<{ up(u) => u | down<{ up(v) => z | down<{}> }> }> }".into(), true));
    out.push(("{ pi2(v) => daimon }".into(), false));
    out.push(("{ up(z) => z | down<{ up(u) => daimon; * => daimon }>; pi2(v) => daimon }".into(), true));
    out.push(("{ up(z) => /\\{ z | *, z | down<{ up(u) => daimon }> }; pi2(v) => daimon }".into(), false));
    out
}

fn criterion_5() -> Outcome {
    let (p, _) = design(SEP_P);
    let (q, _) = design(SEP_Q);
    let defs = DefSystem::new();
    ensure!(!equiv(&p, &q, &defs), "P and Q are equivalent");
    let cands = separation_candidates();
    ensure!(cands.len() >= 50, "only {} candidates", cands.len());
    let (mut yes, mut no) = (0, 0);
    for (text, qualifying) in cands.iter().take(50) {
        let (n, _) = design(text);
        let vp = orthogonal(&p, &n, &defs, FUEL).map_err(|e| format!("{text}: {e}"))?.verdict;
        let vq = orthogonal(&q, &n, &defs, FUEL).map_err(|e| format!("{text}: {e}"))?.verdict;
        let want = if *qualifying { Verdict::Daimon } else { Verdict::Omega };
        ensure!(vp == want && vq == want, "{text}: P gives {vp}, Q gives {vq}, expected {want}");
        if *qualifying {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let b = Behaviour::down(Behaviour::up(Behaviour::zero()));
    let dual = b.dual();
    let mut probes = 0;
    for (text, _) in cands.iter().filter(|(_, q)| *q) {
        let (n, _) = design(text);
        if probes == 20 || !member_by_shape(&n, &dual, &defs) {
            continue;
        }
        let v = orthogonal(&q, &n, &defs, FUEL).map_err(|e| e.to_string())?.verdict;
        ensure!(v == Verdict::Daimon, "Q against member {text}: {v}");
        probes += 1;
    }
    ensure!(probes == 20, "only {probes} probes in the dual behaviour");
    let ctx = Context::new().with_var("x0", b.clone());
    let r = entails_sampled(&q, &ctx, &defs, FUEL, 20).map_err(|e| e.to_string())?;
    ensure!(r.verdict == Verdict::Daimon, "Q sampled membership: {}", r.verdict);
    ensure!(member_by_shape(&p, &b, &defs), "P rejected by the shape check");
    ensure!(!member_by_shape(&q, &b, &defs), "Q accepted by the shape check");
    Ok(format!("50 probes agree ({yes} orthogonal, {no} not); Q passes 20/20 probes and fails the shape check"))
}

// ---------------------------------------------------------------------------
// Sequent corpus for 6, 7 and 9.

fn pairs<T: Clone>(xs: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    let mut out = Vec::new();
    for i in 0..xs.len() {
        for j in i..xs.len() {
            out.push(f(xs[i].clone(), xs[j].clone()));
        }
    }
    out
}

struct Behaviours {
    p1: Vec<Behaviour>,
    n1: Vec<Behaviour>,
    p2: Vec<Behaviour>,
    n2: Vec<Behaviour>,
    p3: Vec<Behaviour>,
    n3: Vec<Behaviour>,
}

fn behaviours() -> Behaviours {
    let p1 = vec![Behaviour::one(), Behaviour::zero()];
    let n1 = vec![Behaviour::bot(), Behaviour::top()];
    let mut n2: Vec<Behaviour> = p1.iter().cloned().map(Behaviour::up).collect();
    n2.extend(pairs(&p1, Behaviour::par));
    n2.extend(pairs(&p1, Behaviour::with));
    let mut p2: Vec<Behaviour> = n1.iter().cloned().map(Behaviour::down).collect();
    p2.extend(pairs(&n1, Behaviour::tensor));
    p2.extend(pairs(&n1, Behaviour::plus));
    let p3 = n2.iter().cloned().map(Behaviour::down).collect();
    let n3 = p2.iter().cloned().map(Behaviour::up).collect();
    Behaviours { p1, n1, p2, n2, p3, n3 }
}

fn contexts() -> Vec<Context> {
    let b = behaviours();
    let mut out = Vec::new();
    for p in b.p1.iter().chain(&b.p2).chain(&b.p3) {
        out.push(Context::new().with_var("x0", p.clone()));
    }
    for n in b.n1.iter().chain(&b.n2).chain(&b.n3) {
        out.push(Context::new().with_neg(n.clone()));
    }
    let small: Vec<&Behaviour> = b.p1.iter().chain(&b.p2).collect();
    for i in 0..small.len() {
        for j in i..small.len() {
            out.push(Context::new().with_var("x", small[i].clone()).with_var("y", small[j].clone()));
        }
    }
    for p in &b.p2 {
        for n in b.n1.iter().chain(&b.n2) {
            out.push(Context::new().with_var("x", p.clone()).with_neg(n.clone()));
        }
    }
    out
}

/// Derivable sequents with proofs of at most six rule instances.
fn derivable_corpus() -> Vec<Sequent> {
    let mut out = Vec::new();
    for ctx in contexts() {
        for (d, _) in enumerate_proofs(&ctx, 6) {
            out.push(Sequent::new(d, ctx.clone()));
        }
    }
    out
}

/// Every corpus subject paired with every context it fits.
fn mixed_corpus() -> Vec<Sequent> {
    let ctxs = contexts();
    let mut subjects: Vec<Design> = Vec::new();
    let mut seen = BTreeSet::new();
    for s in derivable_corpus() {
        if seen.insert(s.subject.to_string()) {
            subjects.push(s.subject);
        }
    }
    let mut out = Vec::new();
    let defs = DefSystem::new();
    for ctx in &ctxs {
        let pol = if ctx.neg.is_some() { Polarity::Negative } else { Polarity::Positive };
        for d in &subjects {
            let fits = d.polarity(&defs) == Some(pol) && d.free_vars().iter().all(|v| ctx.contains(v));
            if fits && d.size() <= 6 {
                out.push(Sequent::new(d.clone(), ctx.clone()));
            }
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let defs = DefSystem::new();
    let corpus = derivable_corpus();
    ensure!(corpus.len() >= 100, "only {} derivable sequents", corpus.len());
    let mut tests = 0;
    for s in &corpus {
        let r = entails_sampled(&s.subject, &s.ctx, &defs, FUEL, 20).map_err(|e| format!("{s}: {e}"))?;
        ensure!(r.verdict == Verdict::Daimon, "{s}: {} after {} tests", r.verdict, r.tested);
        tests += r.tested;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs < 300.0, "took {secs:.1}s");
    Ok(format!("{} derivable sequents, {tests} orthogonality tests, all daimon, {secs:.1}s", corpus.len()))
}

fn dichotomy(s: &Sequent, defs: &DefSystem) -> Result<bool, String> {
    let r = prove(s, defs, FUEL).map_err(|e| format!("{s}: {e}"))?;
    let cm = countermodel(s, defs, FUEL);
    if r.is_derived() {
        ensure!(cm.is_err(), "{s}: derivable yet a countermodel was built");
        return Ok(true);
    }
    let (_, m) = cm.map_err(|e| format!("{s}: {e}"))?;
    let defeat = verify_defeat(s, &m, FUEL).map_err(|e| format!("{s}: {e}"))?;
    ensure!(defeat.verdict() == Verdict::Omega, "{s}: defeat {defeat}");
    let mem = verify_countermodel_membership(s, &m, FUEL, 20).map_err(|e| format!("{s}: {e}"))?;
    ensure!(mem.all_pass(), "{s}: membership fails");
    Ok(false)
}

fn criterion_7() -> Outcome {
    let defs = DefSystem::new();
    let corpus = mixed_corpus();
    let (mut derived, mut refuted) = (0, 0);
    for s in &corpus {
        if dichotomy(s, &defs)? {
            derived += 1;
        } else {
            refuted += 1;
        }
    }
    let (s, defs) = parse_sequent("x0 | b |- x0: one").map_err(|e| e.to_string())?;
    let (_, m) = countermodel(&s, &defs, FUEL).map_err(|e| e.to_string())?;
    let text = m.model(&Var::x0()).map(Design::to_string).unwrap_or_default();
    ensure!(text == "{ * => daimon }", "M(x0) = {text}");
    ensure!(!dichotomy(&s, &defs)?, "stuck sequent derived");
    Ok(format!("{} sequents: {derived} derived, {refuted} refuted by verified countermodels", corpus.len()))
}

// ---------------------------------------------------------------------------
// 8. Periodic branch.

fn criterion_8() -> Outcome {
    let text = "def inf(x) = x | down<{ up(y) => inf(x) }>\ninf(x0) |- x0: down(up(one))";
    let (s, defs) = parse_sequent(text).map_err(|e| e.to_string())?;
    let r = prove(&s, &defs, 50).map_err(|e| e.to_string())?;
    let Some(branch) = r.branch() else { return Err("derived".into()) };
    ensure!(matches!(branch.end, BranchEnd::Periodic { .. }), "branch ends with {:?}", branch.end);
    ensure!(matches!(r, ProofResult::OutOfFuel(_)) && r.verdict() == Some(false), "no periodicity verdict");
    let (_, m) = countermodel(&s, &defs, 50).map_err(|e| e.to_string())?;
    ensure!(matches!(m.kind, ModelKind::Periodic { .. }), "model kind {:?}", m.kind);
    let defeat = verify_defeat(&s, &m, FUEL).map_err(|e| e.to_string())?;
    ensure!(defeat.verdict() == Verdict::Omega && is_cycle(&defeat), "defeat {defeat}");
    let mem = verify_countermodel_membership(&s, &m, FUEL, 20).map_err(|e| e.to_string())?;
    ensure!(mem.all_pass(), "membership fails");
    Ok(format!("periodic after {} steps; {} definition(s); defeat {defeat}", branch.steps.len(), m.defs.len()))
}

// ---------------------------------------------------------------------------
// 9. Finite models for linear subjects.

fn criterion_9() -> Outcome {
    let defs = DefSystem::new();
    let mut checked = 0;
    for s in mixed_corpus() {
        if checked == 50 {
            break;
        }
        if !classify(&s.subject, &defs).linear || prove(&s, &defs, FUEL).map_err(|e| e.to_string())?.is_derived() {
            continue;
        }
        let (_, m) = countermodel(&s, &defs, FUEL).map_err(|e| format!("{s}: {e}"))?;
        ensure!(m.is_finite(), "{s}: model uses definitions");
        for d in m.models.iter().map(|(_, d)| d).chain(m.test.iter()) {
            let c = classify(d, &m.defs);
            ensure!(c.deterministic, "{s}: model {d} is not deterministic");
            ensure!(matches!(c.cardinality, Cardinality::Finite(_)), "{s}: model {d} is infinite");
        }
        checked += 1;
    }
    ensure!(checked == 50, "only {checked} failing linear sequents");
    Ok("50 failing linear sequents, every model finite and deterministic".into())
}

// ---------------------------------------------------------------------------
// 10. Internal completeness, negative case.

const ETHICS_SIZE: usize = 6;

fn criterion_10() -> Outcome {
    let b = behaviours();
    let negs: Vec<Behaviour> = b.n1.iter().chain(&b.n2).cloned().collect();
    let mut pool = Vec::new();
    for n in &negs {
        for (d, _) in enumerate_proofs(&Context::new().with_neg(n.clone()), 5) {
            if !pool.contains(&d) {
                pool.push(d);
            }
        }
    }
    let defs = DefSystem::new();
    let (mut pairs_done, mut members) = (0, 0);
    for beh in &negs {
        let ethics = ethics_members(&beh.dual(), ETHICS_SIZE);
        for n in &pool {
            let by_proof = member_negative(n, beh, &defs, FUEL).map_err(|e| e.to_string())?;
            let mut by_orth = true;
            for e in &ethics {
                let v = orthogonal(e, n, &defs, FUEL).map_err(|e| e.to_string())?.verdict;
                ensure!(v != Verdict::Unknown, "fuel exhausted on {e} against {n}");
                by_orth &= v == Verdict::Daimon;
            }
            ensure!(by_proof == by_orth, "{n} in {beh}: proof search {by_proof}, orthogonality {by_orth}");
            pairs_done += 1;
            members += usize::from(by_proof);
        }
    }
    ensure!(pairs_done >= 50, "only {pairs_done} pairs");
    Ok(format!("{pairs_done} pairs agree ({members} members, {} non-members)", pairs_done - members))
}

// ---------------------------------------------------------------------------
// 11. Closure under meets, duplicability.

fn criterion_11() -> Outcome {
    let b = behaviours();
    let defs = DefSystem::new();
    let mut meets = 0;
    let v = |s: &str| Var::new(s);
    let alpha = Connective::new(
        vec![v("x"), v("y"), v("z"), v("t")],
        vec![
            Action { name: Name::new("a"), vars: vec![v("x"), v("y"), v("t")] },
            Action { name: Name::new("b"), vars: vec![v("t"), v("x")] },
            Action { name: Name::new("c"), vars: vec![v("y"), v("x")] },
        ],
    )
    .map_err(|e| e.to_string())?;
    let (one, zero) = (Behaviour::one(), Behaviour::zero());
    let mut negs: Vec<Behaviour> = b.n1.iter().chain(&b.n2).cloned().collect();
    for args in [[&one, &one, &one, &one], [&one, &zero, &one, &one], [&zero, &one, &zero, &one]] {
        negs.push(Behaviour::neg(alpha.clone(), args.into_iter().cloned().collect()).map_err(|e| e.to_string())?);
    }
    for beh in &negs {
        let ethics = ethics_members(&beh.dual(), ETHICS_SIZE);
        let members: Vec<Design> = negative_members(beh, 5).into_iter().map(|(_, d)| d).take(8).collect();
        for i in 0..members.len() {
            for j in i..members.len() {
                let m = meet(&members[i], &members[j], &defs).map_err(|e| e.to_string())?;
                for e in &ethics {
                    let v = orthogonal(e, &m, &defs, FUEL).map_err(|e| e.to_string())?.verdict;
                    ensure!(v == Verdict::Daimon, "meet of {} and {} against {e}: {v}", members[i], members[j]);
                    meets += 1;
                }
            }
        }
    }
    ensure!(meets >= 50, "only {meets} meet checks");
    let mut dups = 0;
    let x0 = Design::var("x0");
    'outer: for p in b.p1.iter().chain(&b.p2).chain(&b.p3) {
        let ctx = Context::new().with_var("x1", p.clone()).with_var("x2", p.clone());
        let tests = negative_sample(&p.dual(), 20);
        for (d, _) in enumerate_proofs(&ctx, 5) {
            if dups == 50 {
                break 'outer;
            }
            let premise = entails_sampled(&d, &ctx, &defs, FUEL, 20).map_err(|e| e.to_string())?;
            if premise.verdict != Verdict::Daimon {
                continue;
            }
            let bindings = BTreeMap::from([(Var::new("x1"), x0.clone()), (Var::new("x2"), x0.clone())]);
            let merged = substitute(&d, &bindings, &defs).map_err(|e| e.to_string())?;
            for k in &tests {
                let v = orthogonal(&merged, k, &defs, FUEL).map_err(|e| e.to_string())?.verdict;
                ensure!(v == Verdict::Daimon, "{merged} against {k}: {v}");
            }
            dups += 1;
        }
    }
    ensure!(dups >= 50, "only {dups} duplicability instances");
    Ok(format!("{meets} meet checks, {dups} contracted designs all orthogonal"))
}

// ---------------------------------------------------------------------------
// 12. Polarized linear logic.

/// Sorted sum-of-products rendering of one layer, recursing under shifts.
fn iso_key(f: &Formula) -> String {
    fn terms(f: &Formula) -> Vec<Vec<String>> {
        match f.node() {
            Node::Zero => vec![],
            Node::One => vec![vec![]],
            Node::Shift(g) => vec![vec![iso_key(g)]],
            Node::Add(a, b) => [terms(a), terms(b)].concat(),
            Node::Mul(a, b) => {
                let rs = terms(b);
                terms(a).iter().flat_map(|l| rs.iter().map(move |r| [l.clone(), r.clone()].concat())).collect()
            }
        }
    }
    let mut ts: Vec<String> = terms(f)
        .into_iter()
        .map(|mut t| {
            t.sort();
            format!("[{}]", t.join(","))
        })
        .collect();
    ts.sort();
    let tag = if f.polarity() == Polarity::Positive { "+" } else { "-" };
    format!("{tag}{{{}}}", ts.join(";"))
}

fn criterion_12() -> Outcome {
    let corpus = enumerate_strict_sequents(4);
    let (mut yes, mut no) = (0, 0);
    for s in &corpus {
        let a = prove_llp(s, FUEL).map_err(|e| format!("{s}: {e}"))?.verdict;
        let b = prove_llp_syn_direct(s, FUEL);
        ensure!(a.is_some() && a == b, "{s}: by translation {a:?}, direct {b:?}");
        if a == Some(true) {
            yes += 1;
        } else {
            no += 1;
        }
    }
    for (text, want) in [("1", true), ("B | T", true), ("0", false)] {
        let s = StrictSequent::parse(text).map_err(|e| e.to_string())?;
        let got = prove_llp(&s, FUEL).map_err(|e| e.to_string())?.verdict;
        ensure!(got == Some(want), "{s}: {got:?}");
    }
    let pos = formulas_up_to(Polarity::Positive, 4);
    let neg = formulas_up_to(Polarity::Negative, 4);
    let sample: Vec<&Formula> = pos.iter().rev().take(15).chain(neg.iter().rev().take(15)).collect();
    for f in &sample {
        let back = circ(&bullet(f).map_err(|e| e.to_string())?);
        ensure!(iso_key(f) == iso_key(&back), "{f} and {back} differ");
        ensure!(isomorphic(f, &back), "library disagrees on {f} and {back}");
    }
    Ok(format!("{} strict sequents agree ({yes} derivable, {no} not); {} round trips isomorphic", corpus.len(), sample.len()))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("tree automaton", criterion_1),
        ("reduction examples", criterion_2),
        ("associativity", criterion_3),
        ("basic facts", criterion_4),
        ("separation", criterion_5),
        ("soundness", criterion_6),
        ("completeness dichotomy", criterion_7),
        ("periodic countermodel", criterion_8),
        ("finite models", criterion_9),
        ("internal completeness", criterion_10),
        ("meets and duplicability", criterion_11),
        ("polarized linear logic", criterion_12),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut results = Vec::new();
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        if !filter.is_empty() && !filter.contains(&(i + 1)) {
            continue;
        }
        let worker = std::thread::Builder::new().stack_size(256 << 20).spawn(move || {
            let t = Instant::now();
            let r = f();
            (r, t.elapsed().as_secs_f64())
        });
        let (r, t) = match worker.map(|h| h.join()) {
            Ok(Ok(x)) => x,
            _ => (Err("panicked".to_string()), 0.0),
        };
        results.push((i + 1, name, r, t));
    }
    let mut failed = 0;
    for (i, name, r, t) in &results {
        match r {
            Ok(detail) => println!("PASS {i:>2} {name}: {detail} [{t:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {i:>2} {name}: {why} [{t:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
