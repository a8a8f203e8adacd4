use std::collections::HashMap;
use std::fmt::Write;

use super::{Design, Var};

enum Free<'a> {
    Named,
    Blank,
    Mapped(&'a HashMap<Var, String>),
}

struct KeyWriter<'a> {
    free: Free<'a>,
}

impl KeyWriter<'_> {
    fn var(&self, v: &Var, bound: &[Var], out: &mut String) {
        if let Some(level) = bound.iter().rposition(|b| b == v) {
            let _ = write!(out, "#{level}");
            return;
        }
        match &self.free {
            Free::Named => out.push_str(v.as_str()),
            Free::Blank => out.push('$'),
            Free::Mapped(m) => match m.get(v) {
                Some(s) => out.push_str(s),
                None => out.push_str(v.as_str()),
            },
        }
    }

    fn write(&self, d: &Design, bound: &mut Vec<Var>, out: &mut String) {
        match d {
            Design::Omega => out.push('O'),
            Design::Var(v) => self.var(v, bound, out),
            Design::Ref(id, args) => {
                let _ = write!(out, "@{}(", id);
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.var(a, bound, out);
                }
                out.push(')');
            }
            Design::Conj(xs) => {
                let mut keys: Vec<String> = xs
                    .iter()
                    .map(|x| {
                        let mut s = String::new();
                        self.write(x, bound, &mut s);
                        s
                    })
                    .collect();
                keys.sort();
                keys.dedup();
                if keys.len() == 1 {
                    out.push_str(&keys[0]);
                    return;
                }
                out.push_str("&[");
                out.push_str(&keys.join(","));
                out.push(']');
            }
            Design::Pred(p) => {
                out.push('(');
                self.write(&p.head, bound, out);
                let _ = write!(out, "|{}<", p.name);
                for (i, a) in p.args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.write(a, bound, out);
                }
                out.push_str(">)");
            }
            Design::Sum(bs) => {
                out.push('{');
                // Omega branches are the same as absent ones.
                for (i, (n, b)) in bs.iter().filter(|(_, b)| !b.body.is_omega()).enumerate() {
                    if i > 0 {
                        out.push(';');
                    }
                    let _ = write!(out, "{}(", n);
                    let base = bound.len();
                    for (j, v) in b.vars.iter().enumerate() {
                        if j > 0 {
                            out.push(',');
                        }
                        let _ = write!(out, "#{}", base + j);
                        bound.push(v.clone());
                    }
                    out.push_str(")=>");
                    self.write(&b.body, bound, out);
                    bound.truncate(base);
                }
                out.push('}');
            }
        }
    }
}

/// Structural key after alpha-normalization: two reference-free designs are
/// equivalent iff their keys coincide.
pub fn canonical_key(d: &Design) -> String {
    let mut out = String::new();
    KeyWriter { free: Free::Named }.write(d, &mut Vec::new(), &mut out);
    out
}

/// Free variables in a canonical traversal order that does not depend on
/// their names.
pub fn free_vars_ordered(d: &Design) -> Vec<Var> {
    let mut out = Vec::new();
    ordered(d, &mut Vec::new(), &mut out);
    out
}

fn ordered(d: &Design, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
    let see = |v: &Var, bound: &Vec<Var>, out: &mut Vec<Var>| {
        if !bound.contains(v) && !out.contains(v) {
            out.push(v.clone());
        }
    };
    match d {
        Design::Omega => {}
        Design::Var(v) => see(v, bound, out),
        Design::Ref(_, args) => args.iter().for_each(|a| see(a, bound, out)),
        Design::Conj(xs) => {
            let blank = KeyWriter { free: Free::Blank };
            let mut keyed: Vec<(String, &Design)> = xs
                .iter()
                .map(|x| {
                    let mut s = String::new();
                    blank.write(x, bound, &mut s);
                    (s, x)
                })
                .collect();
            keyed.sort_by(|a, b| a.0.cmp(&b.0));
            for (_, x) in keyed {
                ordered(x, bound, out);
            }
        }
        Design::Pred(p) => {
            ordered(&p.head, bound, out);
            p.args.iter().for_each(|a| ordered(a, bound, out));
        }
        Design::Sum(bs) => {
            for b in bs.values() {
                let base = bound.len();
                bound.extend(b.vars.iter().cloned());
                ordered(&b.body, bound, out);
                bound.truncate(base);
            }
        }
    }
}

/// Key with free variables replaced by their positions in
/// [`free_vars_ordered`]; returns the key and that order.
pub fn key_with_free_renaming(d: &Design) -> (String, Vec<Var>) {
    let order = free_vars_ordered(d);
    let map: HashMap<Var, String> = order.iter().cloned().enumerate().map(|(i, v)| (v, format!("${i}"))).collect();
    (key_with_map(d, &map), order)
}

/// Key with the given free variables replaced by fixed strings.
pub(crate) fn key_with_map(d: &Design, map: &HashMap<Var, String>) -> String {
    let mut out = String::new();
    KeyWriter { free: Free::Mapped(map) }.write(d, &mut Vec::new(), &mut out);
    out
}
