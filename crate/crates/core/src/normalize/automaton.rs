//! A nondeterministic top-down tree automaton written as a design.
//!
//! Trees over binary labels `a`, `b` and the leaf `eps` are encoded as
//! `t* = { up(z) => z | l<t1*, t2*> }`. The design `q0(x0)` converges
//! against `t*` exactly when `t` is `b` or `a(b, t')` with `t'` accepted.

use std::fmt;

use std::collections::BTreeMap;

use crate::design::{substitute, Branch, DefSystem, Design, Name, Signature, Var};
use crate::syntax::parse_document;

pub const AUTOMATON: &str = "\
sig { up/1, a/2, b/2, eps/0 }
def q0(x) = x | down<{ a(x, y) => /\\{ q1(x), q0(y) }; b(x, y) => /\\{ q2(x), q2(y) } }>
def q1(x) = x | down<{ b(x, y) => /\\{ q2(x), q2(y) } }>
def q2(x) = x | down<{ eps => daimon }>
";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Eps,
    A(Box<Tree>, Box<Tree>),
    B(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn a(l: Tree, r: Tree) -> Tree {
        Tree::A(Box::new(l), Box::new(r))
    }

    pub fn b(l: Tree, r: Tree) -> Tree {
        Tree::B(Box::new(l), Box::new(r))
    }

    /// The leaf `b(eps, eps)`.
    pub fn leaf_b() -> Tree {
        Tree::b(Tree::Eps, Tree::Eps)
    }

    /// Number of `a`/`b` nodes.
    pub fn size(&self) -> usize {
        match self {
            Tree::Eps => 0,
            Tree::A(l, r) | Tree::B(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Every tree with exactly `n` labelled nodes.
    pub fn all_of_size(n: usize) -> Vec<Tree> {
        if n == 0 {
            return vec![Tree::Eps];
        }
        let mut out = Vec::new();
        for k in 0..n {
            for l in Tree::all_of_size(k) {
                for r in Tree::all_of_size(n - 1 - k) {
                    out.push(Tree::a(l.clone(), r.clone()));
                    out.push(Tree::b(l.clone(), r));
                }
            }
        }
        out
    }

    /// Membership in `b | a(b, L)`, decided directly on the tree.
    pub fn in_language(&self) -> bool {
        match self {
            Tree::B(l, r) => **l == Tree::Eps && **r == Tree::Eps,
            Tree::A(l, r) => **l == Tree::leaf_b() && r.in_language(),
            Tree::Eps => false,
        }
    }

    /// `t*`
    pub fn encode(&self) -> String {
        match self {
            Tree::Eps => "{ up(z) => z | eps }".to_string(),
            Tree::A(l, r) => format!("{{ up(z) => z | a<{}, {}> }}", l.encode(), r.encode()),
            Tree::B(l, r) => format!("{{ up(z) => z | b<{}, {}> }}", l.encode(), r.encode()),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Eps => f.write_str("eps"),
            Tree::A(l, r) if **l == Tree::Eps && **r == Tree::Eps => f.write_str("a"),
            Tree::B(l, r) if **l == Tree::Eps && **r == Tree::Eps => f.write_str("b"),
            Tree::A(l, r) => write!(f, "a({l}, {r})"),
            Tree::B(l, r) => write!(f, "b({l}, {r})"),
        }
    }
}

/// The automaton parsed once, for building many instances.
pub struct Automaton {
    root: Design,
    defs: DefSystem,
}

impl Automaton {
    pub fn new() -> Automaton {
        let doc = parse_document(&format!("{AUTOMATON}q0(x0)"), &Signature::new()).expect("automaton text parses");
        Automaton { root: doc.expr.expect("automaton root"), defs: doc.defs }
    }

    /// The closed design `q0(t*)` with its definitions.
    pub fn instance(&self, t: &Tree) -> (Design, DefSystem) {
        let defs = self.defs.clone();
        let d = substitute(&self.root, &BTreeMap::from([(Var::x0(), t.design())]), &defs).expect("negative argument");
        (d, defs)
    }
}

impl Default for Automaton {
    fn default() -> Automaton {
        Automaton::new()
    }
}

impl Tree {
    /// `t*` as a design; agrees with [`Tree::encode`].
    pub fn design(&self) -> Design {
        let z = Var::new("z");
        let (name, args) = match self {
            Tree::Eps => ("eps", vec![]),
            Tree::A(l, r) => ("a", vec![l.design(), r.design()]),
            Tree::B(l, r) => ("b", vec![l.design(), r.design()]),
        };
        let body = Design::pred(Design::Var(z.clone()), Name::new(name), args);
        Design::sum([(Name::up(), Branch::new(vec![z], body))])
    }
}

/// The closed design `q0(t*)` with its definitions.
pub fn instance(t: &Tree) -> (Design, DefSystem) {
    Automaton::new().instance(t)
}
