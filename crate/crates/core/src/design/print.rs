use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{Design, DefId, DefSystem, Name, Var};

/// Renders designs in the text grammar. Generated variables are renamed to
/// fresh readable names, consistently across every call on one printer.
#[derive(Default)]
pub struct Printer {
    used: HashSet<String>,
    renamed: HashMap<Var, String>,
    scope: Vec<(Var, String)>,
}

impl Printer {
    pub fn new() -> Printer {
        Printer::default()
    }

    /// A printer that avoids every variable name occurring in `ds`.
    pub fn avoiding<'a>(ds: impl IntoIterator<Item = &'a Design>) -> Printer {
        let mut p = Printer::new();
        for d in ds {
            p.reserve_in(d);
        }
        p
    }

    pub fn reserve(&mut self, v: &Var) {
        if !v.is_generated() {
            self.used.insert(v.as_str().to_string());
        }
    }

    fn reserve_in(&mut self, d: &Design) {
        match d {
            Design::Omega => {}
            Design::Var(v) => self.reserve(v),
            Design::Ref(_, args) => args.iter().for_each(|v| self.reserve(v)),
            Design::Conj(xs) => xs.iter().for_each(|x| self.reserve_in(x)),
            Design::Pred(p) => {
                self.reserve_in(&p.head);
                p.args.iter().for_each(|x| self.reserve_in(x));
            }
            Design::Sum(bs) => {
                for b in bs.values() {
                    b.vars.iter().for_each(|v| self.reserve(v));
                    self.reserve_in(&b.body);
                }
            }
        }
    }

    fn friendly(&mut self) -> String {
        let name = (1..).map(|k| format!("v{k}")).find(|n| !self.used.contains(n)).unwrap();
        self.used.insert(name.clone());
        name
    }

    /// Printed form of a free variable.
    pub fn var(&mut self, v: &Var) -> String {
        if let Some((_, s)) = self.scope.iter().rev().find(|(b, _)| b == v) {
            return s.clone();
        }
        if !v.is_generated() {
            return v.as_str().to_string();
        }
        if let Some(s) = self.renamed.get(v) {
            return s.clone();
        }
        let s = self.friendly();
        self.renamed.insert(v.clone(), s.clone());
        s
    }

    fn bind(&mut self, v: &Var) -> String {
        let s = if v.is_generated() { self.friendly() } else { v.as_str().to_string() };
        self.scope.push((v.clone(), s.clone()));
        s
    }

    pub fn design(&mut self, d: &Design) -> String {
        let mut out = String::new();
        self.write(d, &mut out);
        out
    }

    fn write(&mut self, d: &Design, out: &mut String) {
        match d {
            Design::Omega => out.push_str("omega"),
            Design::Conj(xs) if xs.is_empty() => out.push_str("daimon"),
            Design::Conj(xs) => {
                out.push_str("/\\{");
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write(x, out);
                }
                out.push('}');
            }
            Design::Pred(p) => {
                self.write(&p.head, out);
                out.push_str(" | ");
                out.push_str(&positive_name(&p.name));
                if !p.args.is_empty() {
                    out.push('<');
                    for (i, a) in p.args.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        self.write(a, out);
                    }
                    out.push('>');
                }
            }
            Design::Var(v) => {
                let s = self.var(v);
                out.push_str(&s);
            }
            Design::Sum(bs) if bs.is_empty() => out.push_str("{}"),
            Design::Sum(bs) => {
                out.push_str("{ ");
                for (i, (n, b)) in bs.iter().enumerate() {
                    if i > 0 {
                        out.push_str("; ");
                    }
                    out.push_str(n.as_str());
                    let depth = self.scope.len();
                    if !b.vars.is_empty() {
                        let vs: Vec<String> = b.vars.iter().map(|v| self.bind(v)).collect();
                        out.push('(');
                        out.push_str(&vs.join(", "));
                        out.push(')');
                    }
                    out.push_str(" => ");
                    self.write(&b.body, out);
                    self.scope.truncate(depth);
                }
                out.push_str(" }");
            }
            Design::Ref(id, args) if args.is_empty() && id.as_str().starts_with("...") => out.push_str("..."),
            Design::Ref(id, args) => {
                out.push_str(id.as_str());
                out.push('(');
                let vs: Vec<String> = args.iter().map(|v| self.var(v)).collect();
                out.push_str(&vs.join(", "));
                out.push(')');
            }
        }
    }

    /// `def id(params) = body`
    pub fn definition(&mut self, defs: &DefSystem, id: &DefId) -> String {
        let Some(def) = defs.get(id) else { return format!("# unbound {id}") };
        let depth = self.scope.len();
        let params: Vec<String> = def.params.iter().map(|p| self.bind(p)).collect();
        let body = self.design(&def.body);
        self.scope.truncate(depth);
        format!("def {}({}) = {}", id, params.join(", "), body)
    }
}

/// The positive action on `up` is written `down`.
fn positive_name(n: &Name) -> String {
    if n.as_str() == "up" {
        "down".to_string()
    } else {
        n.as_str().to_string()
    }
}

/// The definitions reachable from `roots`, one per line.
pub fn render_defs(defs: &DefSystem, roots: &[&Design]) -> String {
    let mut out = String::new();
    for id in defs.reachable(roots) {
        let mut p = Printer::new();
        if let Some(def) = defs.get(&id) {
            p.reserve_in(&def.body);
            def.params.iter().for_each(|v| p.reserve(v));
        }
        out.push_str(&p.definition(defs, &id));
        out.push('\n');
    }
    out
}

impl fmt::Display for Design {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::avoiding([self]).design(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::Branch;

    #[test]
    fn renders_grammar() {
        let d = Design::pred(
            Design::var("x"),
            Name::up(),
            vec![Design::sum([(Name::up(), Branch::new(vec![Var::new("y")], Design::pred(Design::var("y"), Name::star(), vec![])))])],
        );
        assert_eq!(d.to_string(), "x | down<{ up(y) => y | * }>");
        assert_eq!(Design::daimon().to_string(), "daimon");
        assert_eq!(Design::sum([]).to_string(), "{}");
    }

    #[test]
    fn generated_binders_renamed() {
        let d = Design::sum([(Name::new("a"), Branch::new(vec![Var::new("_3")], Design::pred(Design::var("_3"), Name::new("b"), vec![Design::var("v1")])))]);
        assert_eq!(d.to_string(), "{ a(v2) => v2 | b<v1> }");
    }
}
