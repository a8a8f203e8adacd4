use std::cell::{Cell, RefCell};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use super::{Design, DesignError, DefId, Polarity, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub params: Vec<Var>,
    pub body: Design,
    pub polarity: Polarity,
}

/// A finite system of guarded recursive definitions.
///
/// Besides the definitions it owns the engine state used by substitution:
/// the fresh-variable counter and the memo of specialized definitions.
/// It is deliberately not `Sync`.
#[derive(Debug, Default)]
pub struct DefSystem {
    defs: RefCell<BTreeMap<DefId, Rc<Definition>>>,
    memo: RefCell<HashMap<String, DefId>>,
    fresh: Cell<u64>,
}

impl Clone for DefSystem {
    fn clone(&self) -> DefSystem {
        DefSystem {
            defs: RefCell::new(self.defs.borrow().clone()),
            memo: RefCell::new(self.memo.borrow().clone()),
            fresh: Cell::new(self.fresh.get()),
        }
    }
}

impl DefSystem {
    pub fn new() -> DefSystem {
        DefSystem::default()
    }

    /// Adds a group of (possibly mutually recursive) definitions and checks
    /// scoping, polarity and guardedness of the whole system.
    pub fn define_all(&self, group: Vec<(DefId, Vec<Var>, Design)>) -> Result<(), DesignError> {
        let mut pending = Vec::new();
        for (id, params, body) in group {
            if self.get(&id).is_some() || pending.iter().any(|(p, _, _)| p == &id) {
                return Err(DesignError::DuplicateDef(id));
            }
            let mut seen = BTreeSet::new();
            for p in &params {
                if !seen.insert(p.clone()) {
                    return Err(DesignError::DuplicateBinder(p.clone()));
                }
            }
            if let Some(var) = body.free_vars().into_iter().find(|v| !seen.contains(v)) {
                return Err(DesignError::LooseVariable { id, var });
            }
            pending.push((id, params, body));
        }
        let mut polarities: BTreeMap<DefId, Polarity> = BTreeMap::new();
        loop {
            let mut progress = false;
            for (id, _, body) in &pending {
                if polarities.contains_key(id) {
                    continue;
                }
                let p = match body {
                    Design::Ref(target, _) => polarities.get(target).copied().or_else(|| self.polarity(target)),
                    other => other.polarity(self),
                };
                if let Some(p) = p {
                    polarities.insert(id.clone(), p);
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
        if let Some((id, _, _)) = pending.iter().find(|(id, _, _)| !polarities.contains_key(id)) {
            return Err(DesignError::Unguarded(id.clone()));
        }
        {
            let mut defs = self.defs.borrow_mut();
            for (id, params, body) in pending.iter().cloned() {
                let polarity = polarities[&id];
                defs.insert(id, Rc::new(Definition { params, body, polarity }));
            }
        }
        let ids: Vec<DefId> = pending.into_iter().map(|(id, _, _)| id).collect();
        let result = ids.iter().try_for_each(|id| {
            let def = self.get(id).unwrap();
            self.check_design(&def.body, def.polarity)
        });
        let result = result.and_then(|_| self.check_guarded());
        if result.is_err() {
            let mut defs = self.defs.borrow_mut();
            for id in &ids {
                defs.remove(id);
            }
        }
        result
    }

    pub fn define(&self, id: &DefId, params: Vec<Var>, body: Design) -> Result<(), DesignError> {
        self.define_all(vec![(id.clone(), params, body)])
    }

    pub fn get(&self, id: &DefId) -> Option<Rc<Definition>> {
        self.defs.borrow().get(id).cloned()
    }

    pub fn polarity(&self, id: &DefId) -> Option<Polarity> {
        self.defs.borrow().get(id).map(|d| d.polarity)
    }

    pub fn ids(&self) -> Vec<DefId> {
        self.defs.borrow().keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.defs.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.borrow().is_empty()
    }

    /// Copies the definitions of `other` that are not already present.
    pub fn absorb(&self, other: &DefSystem) -> Result<(), DesignError> {
        let theirs = other.defs.borrow().clone();
        let mut ours = self.defs.borrow_mut();
        for (id, def) in theirs {
            match ours.get(&id) {
                Some(existing) if existing != &def => return Err(DesignError::DuplicateDef(id)),
                Some(_) => {}
                None => {
                    ours.insert(id, def);
                }
            }
        }
        self.fresh.set(self.fresh.get().max(other.fresh.get()));
        Ok(())
    }

    /// Checks that every reference resolves with the right arity and
    /// polarity, `expected` being the polarity of the position of `d`.
    pub fn check_design(&self, d: &Design, expected: Polarity) -> Result<(), DesignError> {
        let found = match d {
            Design::Ref(id, args) => {
                let def = self.get(id).ok_or_else(|| DesignError::UnboundDef(id.clone()))?;
                if def.params.len() != args.len() {
                    return Err(DesignError::DefArity { id: id.clone(), expected: def.params.len(), found: args.len() });
                }
                def.polarity
            }
            Design::Omega => Polarity::Positive,
            Design::Conj(xs) => {
                for x in xs {
                    self.check_design(x, Polarity::Positive)?;
                }
                Polarity::Positive
            }
            Design::Pred(p) => {
                self.check_design(&p.head, Polarity::Negative)?;
                for a in &p.args {
                    self.check_design(a, Polarity::Negative)?;
                }
                Polarity::Positive
            }
            Design::Var(_) => Polarity::Negative,
            Design::Sum(bs) => {
                for b in bs.values() {
                    self.check_design(&b.body, Polarity::Positive)?;
                }
                Polarity::Negative
            }
        };
        if found != expected {
            return Err(DesignError::Polarity { expected, found });
        }
        Ok(())
    }

    /// A definition is unguarded when it can reach itself through references
    /// in head position (the body itself, or a member of a top conjunction).
    fn check_guarded(&self) -> Result<(), DesignError> {
        let defs = self.defs.borrow();
        let edges = |body: &Design| -> Vec<DefId> {
            match body {
                Design::Ref(t, _) => vec![t.clone()],
                Design::Conj(xs) => xs
                    .iter()
                    .filter_map(|x| match x {
                        Design::Ref(t, _) => Some(t.clone()),
                        _ => None,
                    })
                    .collect(),
                _ => Vec::new(),
            }
        };
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Grey,
            Black,
        }
        let mut marks: HashMap<DefId, Mark> = HashMap::new();
        for root in defs.keys() {
            if marks.contains_key(root) {
                continue;
            }
            let mut stack = vec![(root.clone(), edges(&defs[root].body), 0usize)];
            marks.insert(root.clone(), Mark::Grey);
            while let Some((id, succ, i)) = stack.last_mut() {
                if *i == succ.len() {
                    marks.insert(id.clone(), Mark::Black);
                    stack.pop();
                    continue;
                }
                let next = succ[*i].clone();
                *i += 1;
                match marks.get(&next) {
                    Some(Mark::Grey) => return Err(DesignError::Unguarded(next)),
                    Some(Mark::Black) => {}
                    None => {
                        marks.insert(next.clone(), Mark::Grey);
                        let e = defs.get(&next).map(|d| edges(&d.body)).unwrap_or_default();
                        stack.push((next, e, 0));
                    }
                }
            }
        }
        Ok(())
    }

    /// One unfolding step: the body with parameters replaced by `args`.
    pub fn unfold(&self, id: &DefId, args: &[Var]) -> Design {
        let def = self.get(id).unwrap_or_else(|| panic!("unbound definition `{id}`"));
        let map: BTreeMap<Var, Design> =
            def.params.iter().cloned().zip(args.iter().cloned().map(Design::Var)).collect();
        super::subst::substitute_unchecked(&def.body, &map, self)
    }

    pub fn fresh_var(&self) -> Var {
        let n = self.fresh.get();
        self.fresh.set(n + 1);
        Var::new(&format!("_{n}"))
    }

    /// A definition identifier derived from `base` that is not yet in use.
    pub fn fresh_id(&self, base: &str) -> DefId {
        let root = base.split('\'').next().unwrap_or(base);
        let defs = self.defs.borrow();
        let first = DefId::new(&format!("{root}'"));
        if !defs.contains_key(&first) {
            return first;
        }
        (2..)
            .map(|k| DefId::new(&format!("{root}'{k}")))
            .find(|id| !defs.contains_key(id))
            .unwrap()
    }

    pub(super) fn memo_get(&self, key: &str) -> Option<DefId> {
        self.memo.borrow().get(key).cloned()
    }

    pub(super) fn memo_reserve(&self, key: String, id: DefId, polarity: Polarity, params: Vec<Var>) {
        self.memo.borrow_mut().insert(key, id.clone());
        // Placeholder so that the identifier is taken while the body is built.
        self.defs.borrow_mut().insert(id, Rc::new(Definition { params, body: Design::Omega, polarity }));
    }

    pub(super) fn install(&self, id: DefId, def: Definition) {
        self.defs.borrow_mut().insert(id, Rc::new(def));
    }

    /// Inserts a definition without checks; for definitions built by the
    /// library itself (countermodels, fax).
    pub fn insert_trusted(&self, id: DefId, params: Vec<Var>, body: Design, polarity: Polarity) {
        self.install(id, Definition { params, body, polarity });
    }

    /// Definitions reachable from the given designs, in identifier order.
    pub fn reachable(&self, roots: &[&Design]) -> Vec<DefId> {
        let mut seen = BTreeSet::new();
        let mut todo: Vec<DefId> = Vec::new();
        for r in roots {
            refs_of(r, &mut todo);
        }
        while let Some(id) = todo.pop() {
            if seen.insert(id.clone()) {
                if let Some(def) = self.get(&id) {
                    refs_of(&def.body, &mut todo);
                }
            }
        }
        seen.into_iter().collect()
    }
}

pub(super) fn refs_of(d: &Design, out: &mut Vec<DefId>) {
    match d {
        Design::Omega | Design::Var(_) => {}
        Design::Ref(id, _) => out.push(id.clone()),
        Design::Conj(xs) => xs.iter().for_each(|x| refs_of(x, out)),
        Design::Pred(p) => {
            refs_of(&p.head, out);
            p.args.iter().for_each(|x| refs_of(x, out));
        }
        Design::Sum(bs) => bs.values().for_each(|b| refs_of(&b.body, out)),
    }
}
