use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::design::{canonical_key, substitute_unchecked, Design, DefSystem, Predesign, Var};

use super::{Certificate, EvalOutcome, Verdict};

/// Head normal forms reachable from a state, keyed canonically.
pub(crate) type Hnfs = Rc<BTreeMap<String, Design>>;

#[derive(Clone, Debug)]
pub(crate) enum Status {
    /// On the current exploration path.
    Active,
    /// Diverges; `next` is the successor along a witness path, `None` when
    /// the state is `Omega` itself.
    Omega { next: Option<String> },
    /// Fully explored without divergence.
    Done(Hnfs),
}

struct Entry {
    design: Design,
    status: Status,
}

/// Result of exploring one positive position.
#[derive(Clone, Debug)]
pub(crate) enum Reach {
    Omega,
    Converges(Hnfs),
    Unknown { depth: usize },
}

struct Frame {
    key: String,
    succs: Vec<Design>,
    next: usize,
    hnfs: BTreeMap<String, Design>,
}

/// The reduct of a cut, or `None` for a head normal form.
pub(crate) fn fire(s: &Predesign, defs: &DefSystem) -> Option<Design> {
    let Design::Sum(bs) = s.head.expose_neg(defs) else { return None };
    let Some(branch) = bs.get(&s.name) else { return Some(Design::Omega) };
    let map: BTreeMap<Var, Design> = branch.vars.iter().cloned().zip(s.args.iter().cloned()).collect();
    Some(substitute_unchecked(&branch.body, &map, defs))
}

/// Memoized explorer of reduction graphs. The memo is shared by every
/// position explored through one explorer; fuel is per position.
pub struct Explorer<'a> {
    defs: &'a DefSystem,
    fuel: usize,
    memo: HashMap<String, Entry>,
    explored: usize,
    edges: usize,
}

impl<'a> Explorer<'a> {
    pub fn new(defs: &'a DefSystem, fuel: usize) -> Explorer<'a> {
        Explorer { defs, fuel: fuel.max(1), memo: HashMap::new(), explored: 0, edges: 0 }
    }

    pub fn defs(&self) -> &'a DefSystem {
        self.defs
    }

    /// Evaluates a positive design to a verdict with its certificate.
    pub fn evaluate(&mut self, p: &Design) -> EvalOutcome {
        let key = canonical_key(p);
        let reach = self.reach_keyed(p, key.clone());
        let explored = self.explored;
        match reach {
            Reach::Converges(h) if h.is_empty() => EvalOutcome {
                verdict: Verdict::Daimon,
                certificate: Certificate::Explored { states: explored, edges: self.edges },
                explored,
            },
            // Open designs converge to their head normal forms; as a closed
            // verdict this is not a daimon.
            Reach::Converges(_) => EvalOutcome {
                verdict: Verdict::Unknown,
                certificate: Certificate::Explored { states: explored, edges: self.edges },
                explored,
            },
            Reach::Omega => EvalOutcome { verdict: Verdict::Omega, certificate: self.witness(&key), explored },
            Reach::Unknown { depth } => {
                EvalOutcome { verdict: Verdict::Unknown, certificate: Certificate::Frontier { depth }, explored }
            }
        }
    }

    fn witness(&self, root: &str) -> Certificate {
        let mut path = Vec::new();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let mut key = root;
        loop {
            if let Some(&i) = seen.get(key) {
                path.push(self.memo[key].design.clone());
                return Certificate::Cycle { path, back_to: i };
            }
            let entry = &self.memo[key];
            seen.insert(key, path.len());
            path.push(entry.design.clone());
            match &entry.status {
                Status::Omega { next: Some(n) } => key = n,
                _ => return Certificate::OmegaPath(path),
            }
        }
    }

    pub(crate) fn reach(&mut self, p: &Design) -> Reach {
        let key = canonical_key(p);
        self.reach_keyed(p, key)
    }

    fn reach_keyed(&mut self, root: &Design, key: String) -> Reach {
        self.explored = 0;
        self.edges = 0;
        if let Some(e) = self.memo.get(&key) {
            match &e.status {
                Status::Omega { .. } => return Reach::Omega,
                Status::Done(h) => return Reach::Converges(h.clone()),
                Status::Active => {}
            }
        }
        let mut stack: Vec<Frame> = Vec::new();
        if !self.push(&mut stack, root.clone(), key) {
            return Reach::Omega;
        }
        loop {
            let top = stack.last_mut().expect("nonempty stack");
            if top.next < top.succs.len() {
                let s = top.succs[top.next].clone();
                top.next += 1;
                self.edges += 1;
                let k = canonical_key(&s);
                match self.memo.get(&k).map(|e| &e.status) {
                    Some(Status::Active) | Some(Status::Omega { .. }) => {
                        self.mark_omega(&mut stack, Some(k));
                        return Reach::Omega;
                    }
                    Some(Status::Done(h)) => {
                        let h = h.clone();
                        let top = stack.last_mut().unwrap();
                        top.hnfs.extend(h.iter().map(|(k, v)| (k.clone(), v.clone())));
                    }
                    None => {
                        if self.explored >= self.fuel {
                            let depth = stack.len();
                            for f in stack {
                                self.memo.remove(&f.key);
                            }
                            return Reach::Unknown { depth };
                        }
                        if !self.push(&mut stack, s, k) {
                            return Reach::Omega;
                        }
                    }
                }
            } else {
                let f = stack.pop().unwrap();
                let h: Hnfs = Rc::new(f.hnfs);
                self.memo.get_mut(&f.key).unwrap().status = Status::Done(h.clone());
                match stack.last_mut() {
                    None => return Reach::Converges(h),
                    Some(parent) => parent.hnfs.extend(h.iter().map(|(k, v)| (k.clone(), v.clone()))),
                }
            }
        }
    }

    /// Pushes a new state; returns false (after marking the path) if it is
    /// `Omega`.
    fn push(&mut self, stack: &mut Vec<Frame>, d: Design, key: String) -> bool {
        self.explored += 1;
        let items = d.expose_pos(self.defs);
        self.memo.insert(key.clone(), Entry { design: d, status: Status::Active });
        let Some(items) = items else {
            self.memo.get_mut(&key).unwrap().status = Status::Omega { next: None };
            self.mark_omega(stack, Some(key));
            return false;
        };
        let mut succs = Vec::new();
        let mut hnfs = BTreeMap::new();
        for s in items {
            match fire(&s, self.defs) {
                Some(r) => succs.push(r),
                None => {
                    let h = s.into_design();
                    hnfs.insert(canonical_key(&h), h);
                }
            }
        }
        stack.push(Frame { key, succs, next: 0, hnfs });
        true
    }

    /// Every state on the path diverges: mark each with its successor.
    fn mark_omega(&mut self, stack: &mut Vec<Frame>, last: Option<String>) {
        let keys: Vec<String> = stack.drain(..).map(|f| f.key).collect();
        for (i, k) in keys.iter().enumerate() {
            let next = if i + 1 < keys.len() { Some(keys[i + 1].clone()) } else { last.clone() };
            self.memo.get_mut(k).unwrap().status = Status::Omega { next };
        }
    }

    /// Number of states explored by the last call.
    pub fn explored(&self) -> usize {
        self.explored
    }
}
