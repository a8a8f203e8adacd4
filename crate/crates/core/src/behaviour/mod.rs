//! Logical connectives and the behaviours they generate.

mod membership;
mod print;
mod syntax;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::design::{Name, Polarity, Var};

pub use membership::{
    entails_sampled, ethics_members, ethics_sample, member_by_shape, member_negative, negative_members, negative_sample,
    orthogonal_to_ethics, EntailReport, Sample,
};
pub use print::BehaviourPrinter;
pub use syntax::{parse_behaviour, parse_context};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BehaviourError {
    #[error("duplicate action name `{0}`")]
    DuplicateAction(Name),
    #[error("variable `{var}` of action `{action}` is not a parameter")]
    UnknownVariable { action: Name, var: Var },
    #[error("variable `{var}` repeated in action `{action}`")]
    RepeatedVariable { action: Name, var: Var },
    #[error("duplicate parameter `{0}`")]
    DuplicateParameter(Var),
    #[error("connective expects {expected} arguments, got {found}")]
    Arity { expected: usize, found: usize },
    #[error("argument of a {0} behaviour must have the opposite polarity")]
    ArgumentPolarity(Polarity),
    #[error("variable `{0}` appears twice in the context")]
    DuplicateContextVar(Var),
    #[error("context variable `{0}` must carry a positive behaviour")]
    NegativeInContext(Var),
}

/// A negative action `a(x1..xn)` of a connective.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Action {
    pub name: Name,
    pub vars: Vec<Var>,
}

/// `(z1..zn, {a(x..), b(y..), ..})`, identified up to renaming of the
/// placeholders.
#[derive(Debug, Clone)]
pub struct Connective {
    params: Vec<Var>,
    actions: Vec<Action>,
    label: Option<Arc<str>>,
    key: Arc<str>,
}

impl PartialEq for Connective {
    fn eq(&self, other: &Connective) -> bool {
        self.key == other.key
    }
}

impl Eq for Connective {}

impl Hash for Connective {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.key.hash(h);
    }
}

impl Connective {
    pub fn new(params: Vec<Var>, actions: Vec<Action>) -> Result<Connective, BehaviourError> {
        for (i, p) in params.iter().enumerate() {
            if params[..i].contains(p) {
                return Err(BehaviourError::DuplicateParameter(p.clone()));
            }
        }
        let mut actions = actions;
        actions.sort_by(|a, b| a.name.cmp(&b.name));
        for w in actions.windows(2) {
            if w[0].name == w[1].name {
                return Err(BehaviourError::DuplicateAction(w[0].name.clone()));
            }
        }
        let mut key = format!("{}|", params.len());
        for a in &actions {
            for (i, v) in a.vars.iter().enumerate() {
                if !params.contains(v) {
                    return Err(BehaviourError::UnknownVariable { action: a.name.clone(), var: v.clone() });
                }
                if a.vars[..i].contains(v) {
                    return Err(BehaviourError::RepeatedVariable { action: a.name.clone(), var: v.clone() });
                }
            }
            let idx: Vec<String> =
                a.vars.iter().map(|v| params.iter().position(|p| p == v).unwrap().to_string()).collect();
            key.push_str(&format!("{}({});", a.name, idx.join(",")));
        }
        Ok(Connective { params, actions, label: None, key: Arc::from(key) })
    }

    fn build(params: &[&str], actions: &[(&str, &[&str])]) -> Connective {
        let params = params.iter().map(|p| Var::new(p)).collect();
        let actions = actions
            .iter()
            .map(|(n, vs)| Action { name: Name::new(n), vars: vs.iter().map(|v| Var::new(v)).collect() })
            .collect();
        Connective::new(params, actions).expect("library connective")
    }

    pub fn labelled(mut self, label: &str) -> Connective {
        self.label = Some(Arc::from(label));
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn params(&self) -> &[Var] {
        &self.params
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Actions in name order.
    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn action(&self, name: &Name) -> Option<&Action> {
        self.actions.iter().find(|a| &a.name == name)
    }

    /// Index of a placeholder among the parameters.
    pub fn index_of(&self, v: &Var) -> usize {
        self.params.iter().position(|p| p == v).expect("action variable is a parameter")
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    /// `(x1, x2, {wp(x1, x2)})`: par, and tensor on the positive side.
    pub fn par() -> Connective {
        Connective::build(&["x1", "x2"], &[("wp", &["x1", "x2"])])
    }

    /// `(x1, x2, {pi1(x1), pi2(x2)})`: with, and plus on the positive side.
    pub fn with() -> Connective {
        Connective::build(&["x1", "x2"], &[("pi1", &["x1"]), ("pi2", &["x2"])])
    }

    /// `(x, {up(x)})`: up, and down on the positive side.
    pub fn up() -> Connective {
        Connective::build(&["x"], &[("up", &["x"])])
    }

    /// `(, {*})`: bot, and one on the positive side.
    pub fn bot() -> Connective {
        Connective::build(&[], &[("*", &[])])
    }

    /// `(, {})`: top, and zero on the positive side.
    pub fn top() -> Connective {
        Connective::build(&[], &[])
    }

    pub fn tensor() -> Connective {
        Connective::par()
    }

    pub fn plus() -> Connective {
        Connective::with()
    }

    pub fn down() -> Connective {
        Connective::up()
    }

    pub fn one() -> Connective {
        Connective::bot()
    }

    pub fn zero() -> Connective {
        Connective::top()
    }
}

/// A logical behaviour: a finite tree of connectives with alternating
/// polarities.
#[derive(Debug, Clone)]
pub struct Behaviour {
    polarity: Polarity,
    conn: Arc<Connective>,
    args: Vec<Behaviour>,
    key: Arc<str>,
}

impl PartialEq for Behaviour {
    fn eq(&self, other: &Behaviour) -> bool {
        self.key == other.key
    }
}

impl Eq for Behaviour {}

impl Hash for Behaviour {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.key.hash(h);
    }
}

impl PartialOrd for Behaviour {
    fn partial_cmp(&self, other: &Behaviour) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Behaviour {
    fn cmp(&self, other: &Behaviour) -> std::cmp::Ordering {
        self.key.cmp(&other.key)
    }
}

impl Behaviour {
    pub fn new(polarity: Polarity, conn: Connective, args: Vec<Behaviour>) -> Result<Behaviour, BehaviourError> {
        Behaviour::from_arc(polarity, Arc::new(conn), args)
    }

    pub fn from_arc(polarity: Polarity, conn: Arc<Connective>, args: Vec<Behaviour>) -> Result<Behaviour, BehaviourError> {
        if conn.arity() != args.len() {
            return Err(BehaviourError::Arity { expected: conn.arity(), found: args.len() });
        }
        if args.iter().any(|a| a.polarity == polarity) {
            return Err(BehaviourError::ArgumentPolarity(polarity));
        }
        let sign = if polarity == Polarity::Positive { '+' } else { '-' };
        let inner: Vec<&str> = args.iter().map(|a| &*a.key).collect();
        let key = format!("{sign}[{}]({})", conn.key(), inner.join(","));
        Ok(Behaviour { polarity, conn, args, key: Arc::from(key) })
    }

    pub fn pos(conn: Connective, args: Vec<Behaviour>) -> Result<Behaviour, BehaviourError> {
        Behaviour::new(Polarity::Positive, conn, args)
    }

    pub fn neg(conn: Connective, args: Vec<Behaviour>) -> Result<Behaviour, BehaviourError> {
        Behaviour::new(Polarity::Negative, conn, args)
    }

    fn lib(polarity: Polarity, conn: Connective, args: Vec<Behaviour>) -> Behaviour {
        Behaviour::new(polarity, conn, args).expect("library behaviour")
    }

    pub fn one() -> Behaviour {
        Behaviour::lib(Polarity::Positive, Connective::one(), vec![])
    }

    pub fn zero() -> Behaviour {
        Behaviour::lib(Polarity::Positive, Connective::zero(), vec![])
    }

    pub fn bot() -> Behaviour {
        Behaviour::lib(Polarity::Negative, Connective::bot(), vec![])
    }

    pub fn top() -> Behaviour {
        Behaviour::lib(Polarity::Negative, Connective::top(), vec![])
    }

    /// Panics unless `n` is negative.
    pub fn down(n: Behaviour) -> Behaviour {
        Behaviour::lib(Polarity::Positive, Connective::down(), vec![n])
    }

    pub fn up(p: Behaviour) -> Behaviour {
        Behaviour::lib(Polarity::Negative, Connective::up(), vec![p])
    }

    pub fn tensor(n: Behaviour, m: Behaviour) -> Behaviour {
        Behaviour::lib(Polarity::Positive, Connective::tensor(), vec![n, m])
    }

    pub fn plus(n: Behaviour, m: Behaviour) -> Behaviour {
        Behaviour::lib(Polarity::Positive, Connective::plus(), vec![n, m])
    }

    pub fn par(p: Behaviour, q: Behaviour) -> Behaviour {
        Behaviour::lib(Polarity::Negative, Connective::par(), vec![p, q])
    }

    pub fn with(p: Behaviour, q: Behaviour) -> Behaviour {
        Behaviour::lib(Polarity::Negative, Connective::with(), vec![p, q])
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn connective(&self) -> &Arc<Connective> {
        &self.conn
    }

    pub fn args(&self) -> &[Behaviour] {
        &self.args
    }

    /// Argument behaviour bound to the placeholder `v` of the connective.
    pub fn arg_for(&self, v: &Var) -> &Behaviour {
        &self.args[self.conn.index_of(v)]
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    /// Same connective, opposite polarity, dual arguments.
    pub fn dual(&self) -> Behaviour {
        let args = self.args.iter().map(Behaviour::dual).collect();
        Behaviour::from_arc(self.polarity.flip(), self.conn.clone(), args).expect("dual preserves shape")
    }

    /// Height of the connective tree; constants have depth 1.
    pub fn depth(&self) -> usize {
        1 + self.args.iter().map(Behaviour::depth).max().unwrap_or(0)
    }

    /// Every name used by the connectives of the tree, with its arity.
    pub fn names(&self, out: &mut std::collections::BTreeMap<Name, usize>) {
        for a in self.conn.actions() {
            out.insert(a.name.clone(), a.vars.len());
        }
        self.args.iter().for_each(|b| b.names(out));
    }
}

impl fmt::Display for Behaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut p = BehaviourPrinter::new();
        let s = p.behaviour(self);
        f.write_str(&s)
    }
}

/// `x1:P1, .., xn:Pn` with an optional negative slot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    pub pos: Vec<(Var, Behaviour)>,
    pub neg: Option<Behaviour>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn with_var(mut self, v: &str, b: Behaviour) -> Context {
        self.pos.push((Var::new(v), b));
        self
    }

    pub fn with_neg(mut self, b: Behaviour) -> Context {
        self.neg = Some(b);
        self
    }

    pub fn validate(&self) -> Result<(), BehaviourError> {
        for (i, (v, b)) in self.pos.iter().enumerate() {
            if self.pos[..i].iter().any(|(w, _)| w == v) {
                return Err(BehaviourError::DuplicateContextVar(v.clone()));
            }
            if b.polarity() != Polarity::Positive {
                return Err(BehaviourError::NegativeInContext(v.clone()));
            }
        }
        if let Some(n) = &self.neg {
            if n.polarity() != Polarity::Negative {
                return Err(BehaviourError::ArgumentPolarity(Polarity::Negative));
            }
        }
        Ok(())
    }

    pub fn lookup(&self, v: &Var) -> Option<&Behaviour> {
        self.pos.iter().find(|(w, _)| w == v).map(|(_, b)| b)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.pos.iter().map(|(v, _)| v)
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.pos.iter().any(|(w, _)| w == v)
    }

    /// Context restricted to the given variables (order preserved).
    pub fn restrict(&self, keep: &std::collections::BTreeSet<Var>) -> Context {
        Context { pos: self.pos.iter().filter(|(v, _)| keep.contains(v)).cloned().collect(), neg: self.neg.clone() }
    }
}

/// A variable based on `base` that is not in `avoid`: `base` itself when
/// possible, else `base_1`, `base_2`, ...
pub(crate) fn fresh_like(base: &Var, avoid: &dyn Fn(&Var) -> bool) -> Var {
    if !avoid(base) {
        return base.clone();
    }
    (1..).map(|k| Var::new(&format!("{}_{k}", base.as_str()))).find(|v| !avoid(v)).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_table() {
        let w = Connective::with();
        assert_eq!(w.params(), &[Var::new("x1"), Var::new("x2")]);
        assert_eq!(w.actions().len(), 2);
        assert_eq!(w.action(&Name::new("pi1")).unwrap().vars, vec![Var::new("x1")]);
        assert!(Connective::top().actions().is_empty());
        assert_eq!(Connective::bot().actions()[0].name, Name::star());
    }

    #[test]
    fn paper_connective_accepted() {
        let v = |s: &str| Var::new(s);
        let c = Connective::new(
            vec![v("x"), v("y"), v("z"), v("t")],
            vec![
                Action { name: Name::new("a"), vars: vec![v("x"), v("y"), v("t")] },
                Action { name: Name::new("b"), vars: vec![v("t"), v("x")] },
                Action { name: Name::new("c"), vars: vec![v("y"), v("x")] },
            ],
        );
        assert!(c.is_ok());
    }

    #[test]
    fn malformed_connectives() {
        let v = |s: &str| Var::new(s);
        let dup = Connective::new(
            vec![v("x")],
            vec![Action { name: Name::new("a"), vars: vec![] }, Action { name: Name::new("a"), vars: vec![v("x")] }],
        );
        assert!(matches!(dup, Err(BehaviourError::DuplicateAction(_))));
        let outside = Connective::new(vec![v("x")], vec![Action { name: Name::new("a"), vars: vec![v("y")] }]);
        assert!(matches!(outside, Err(BehaviourError::UnknownVariable { .. })));
        let repeated = Connective::new(vec![v("x")], vec![Action { name: Name::new("a"), vars: vec![v("x"), v("x")] }]);
        assert!(matches!(repeated, Err(BehaviourError::RepeatedVariable { .. })));
    }

    #[test]
    fn renaming_placeholders_is_identity() {
        let v = |s: &str| Var::new(s);
        let a = Connective::new(vec![v("p"), v("q")], vec![Action { name: Name::new("wp"), vars: vec![v("p"), v("q")] }]).unwrap();
        assert_eq!(a, Connective::par());
    }

    #[test]
    fn duality() {
        let b = Behaviour::down(Behaviour::with(Behaviour::one(), Behaviour::zero()));
        assert_eq!(b.dual().dual(), b);
        assert_eq!(Behaviour::one().dual(), Behaviour::bot());
        assert_eq!(b.dual(), Behaviour::up(Behaviour::plus(Behaviour::bot(), Behaviour::top())));
        assert_eq!(b.depth(), 3);
    }
}
