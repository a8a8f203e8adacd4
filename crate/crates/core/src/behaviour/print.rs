use std::collections::BTreeMap;

use crate::design::Polarity;

use super::{Behaviour, Connective, Context};

/// Prints behaviours in the text grammar. Library connectives use their
/// sugar; other connectives are collected as `conn` declarations, labelled
/// by their own label or `c1`, `c2`, ...
#[derive(Default)]
pub struct BehaviourPrinter {
    decls: BTreeMap<String, Connective>,
    labels: Vec<(String, String)>,
}

fn sugar(conn: &Connective, polarity: Polarity) -> Option<&'static str> {
    let table = [
        (Connective::bot(), "one", "bot"),
        (Connective::top(), "zero", "top"),
        (Connective::up(), "down", "up"),
        (Connective::par(), "tensor", "par"),
        (Connective::with(), "plus", "with"),
    ];
    let (_, p, n) = table.into_iter().find(|(c, _, _)| c == conn)?;
    Some(if polarity == Polarity::Positive { p } else { n })
}

impl BehaviourPrinter {
    pub fn new() -> BehaviourPrinter {
        BehaviourPrinter::default()
    }

    fn label(&mut self, conn: &Connective) -> String {
        if let Some((_, l)) = self.labels.iter().find(|(k, _)| k == conn.key()) {
            return l.clone();
        }
        let base = conn.label().map(str::to_string);
        let l = match base {
            Some(b) if !self.decls.contains_key(&b) => b,
            _ => (1..).map(|k| format!("c{k}")).find(|l| !self.decls.contains_key(l)).unwrap(),
        };
        self.labels.push((conn.key().to_string(), l.clone()));
        self.decls.insert(l.clone(), conn.clone());
        l
    }

    pub fn behaviour(&mut self, b: &Behaviour) -> String {
        let args: Vec<String> = b.args().iter().map(|a| self.behaviour(a)).collect();
        let conn = b.connective();
        if conn.label().is_none() {
            if let Some(s) = sugar(conn, b.polarity()) {
                return if args.is_empty() { s.to_string() } else { format!("{s}({})", args.join(", ")) };
            }
        }
        let l = self.label(conn);
        match b.polarity() {
            Polarity::Positive => format!("pos {l}<{}>", args.join(", ")),
            Polarity::Negative => format!("neg {l}({})", args.join(", ")),
        }
    }

    /// Name of the outermost connective: its sugar, or its label.
    pub fn connective_name(&mut self, b: &Behaviour) -> String {
        let conn = b.connective();
        if conn.label().is_none() {
            if let Some(s) = sugar(conn, b.polarity()) {
                return s.to_string();
            }
        }
        self.label(conn)
    }

    pub fn context(&mut self, ctx: &Context) -> String {
        let mut parts: Vec<String> = ctx.pos.iter().map(|(v, b)| format!("{v}: {}", self.behaviour(b))).collect();
        if let Some(n) = &ctx.neg {
            parts.push(self.behaviour(n));
        }
        parts.join(", ")
    }

    /// The `conn` declarations needed by everything printed so far.
    pub fn declarations(&self) -> String {
        let mut out = String::new();
        for (l, c) in &self.decls {
            let acts: Vec<String> = c
                .actions()
                .iter()
                .map(|a| {
                    let vs: Vec<&str> = a.vars.iter().map(|v| v.as_str()).collect();
                    format!("{}({})", a.name, vs.join(", "))
                })
                .collect();
            let ps: Vec<&str> = c.params().iter().map(|v| v.as_str()).collect();
            out.push_str(&format!("conn {l}({}) {{ {} }}\n", ps.join(", "), acts.join(" ")));
        }
        out
    }
}
