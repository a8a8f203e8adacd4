//! Constant-only polarized linear logic.
//!
//! Formulas are written in ASCII: `0 1 T B` for the units (`B` is bottom),
//! `* + & |` for tensor, plus, with and par, `!` and `?` as prefixes.
//! Multiplicatives bind tighter than additives; binary connectives
//! associate to the right.

mod prove;
mod synthetic;
mod translate;

use std::fmt;

use crate::design::Polarity;

pub use prove::{
    enumerate_strict_sequents, prove_llp, prove_llp_syn_direct, prove_llp_syn_traced, LlpProof, StrictSequent,
};
pub use synthetic::{parse_synthetic, synthetic_decompose, Layer, SyntheticConnective};
pub use translate::{bullet, bullet_connective, circ, circ_context, isomorphic, normal_shape, Shape};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LlpError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("polarity error: {0}")]
    Polarity(String),
    #[error("variable `{0}` occurs on both sides of a multiplicative")]
    Disjointness(String),
    #[error("not a strict sequent: {0}")]
    NotStrict(String),
    #[error("inconsistent translation: {0}")]
    Translation(String),
}

/// A formula node. On the positive side `Zero`, `One`, `Mul`, `Add` and
/// `Shift` read `0`, `1`, tensor, plus and `!`; on the negative side `T`,
/// bottom, par, with and `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Zero,
    One,
    Mul(Box<Formula>, Box<Formula>),
    Add(Box<Formula>, Box<Formula>),
    Shift(Box<Formula>),
}

/// A formula with strict polarity alternation at the shifts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Formula {
    polarity: Polarity,
    node: Node,
}

impl Formula {
    pub fn unit(polarity: Polarity, multiplicative: bool) -> Formula {
        Formula { polarity, node: if multiplicative { Node::One } else { Node::Zero } }
    }

    pub fn zero() -> Formula {
        Formula::unit(Polarity::Positive, false)
    }

    pub fn one() -> Formula {
        Formula::unit(Polarity::Positive, true)
    }

    pub fn top() -> Formula {
        Formula::unit(Polarity::Negative, false)
    }

    pub fn bot() -> Formula {
        Formula::unit(Polarity::Negative, true)
    }

    fn binary(mul: bool, a: Formula, b: Formula) -> Result<Formula, LlpError> {
        if a.polarity != b.polarity {
            return Err(LlpError::Polarity(format!("`{a}` and `{b}` have different polarities")));
        }
        let (a, b) = (Box::new(a), Box::new(b));
        let polarity = a.polarity;
        Ok(Formula { polarity, node: if mul { Node::Mul(a, b) } else { Node::Add(a, b) } })
    }

    /// Tensor or par, by the polarity of the operands.
    pub fn mul(a: Formula, b: Formula) -> Result<Formula, LlpError> {
        Formula::binary(true, a, b)
    }

    /// Plus or with, by the polarity of the operands.
    pub fn add(a: Formula, b: Formula) -> Result<Formula, LlpError> {
        Formula::binary(false, a, b)
    }

    /// `!N` for negative `N`, `?P` for positive `P`.
    pub fn shift(f: Formula) -> Formula {
        Formula { polarity: f.polarity.flip(), node: Node::Shift(Box::new(f)) }
    }

    pub fn bang(n: Formula) -> Result<Formula, LlpError> {
        if n.polarity != Polarity::Negative {
            return Err(LlpError::Polarity(format!("`!` expects a negative formula, found `{n}`")));
        }
        Ok(Formula::shift(n))
    }

    pub fn quest(p: Formula) -> Result<Formula, LlpError> {
        if p.polarity != Polarity::Positive {
            return Err(LlpError::Polarity(format!("`?` expects a positive formula, found `{p}`")));
        }
        Ok(Formula::shift(p))
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// `?P` as `Some(P)`.
    pub fn as_quest(&self) -> Option<&Formula> {
        match (&self.node, self.polarity) {
            (Node::Shift(p), Polarity::Negative) => Some(p),
            _ => None,
        }
    }

    /// Linear negation.
    pub fn dual(&self) -> Formula {
        let node = match &self.node {
            Node::Zero => Node::Zero,
            Node::One => Node::One,
            Node::Mul(a, b) => Node::Mul(Box::new(a.dual()), Box::new(b.dual())),
            Node::Add(a, b) => Node::Add(Box::new(a.dual()), Box::new(b.dual())),
            Node::Shift(a) => Node::Shift(Box::new(a.dual())),
        };
        Formula { polarity: self.polarity.flip(), node }
    }

    /// Number of connectives and units.
    pub fn size(&self) -> usize {
        match &self.node {
            Node::Zero | Node::One => 1,
            Node::Mul(a, b) | Node::Add(a, b) => 1 + a.size() + b.size(),
            Node::Shift(a) => 1 + a.size(),
        }
    }
}

fn symbol(pol: Polarity, node: &Node) -> &'static str {
    match (pol, node) {
        (Polarity::Positive, Node::Zero) => "0",
        (Polarity::Positive, Node::One) => "1",
        (Polarity::Positive, Node::Mul(..)) => "*",
        (Polarity::Positive, Node::Add(..)) => "+",
        (Polarity::Positive, Node::Shift(_)) => "!",
        (Polarity::Negative, Node::Zero) => "T",
        (Polarity::Negative, Node::One) => "B",
        (Polarity::Negative, Node::Mul(..)) => "|",
        (Polarity::Negative, Node::Add(..)) => "&",
        (Polarity::Negative, Node::Shift(_)) => "?",
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Zero | Node::One => f.write_str(symbol(self.polarity, &self.node)),
            Node::Shift(a) => {
                f.write_str(symbol(self.polarity, &self.node))?;
                if matches!(a.node, Node::Mul(..) | Node::Add(..)) {
                    write!(f, "({a})")
                } else {
                    write!(f, "{a}")
                }
            }
            Node::Mul(a, b) | Node::Add(a, b) => {
                let op = symbol(self.polarity, &self.node);
                let same = |x: &Formula| std::mem::discriminant(&x.node) == std::mem::discriminant(&self.node);
                let is_add = matches!(self.node, Node::Add(..));
                // Left operands need parentheses when binary; right operands
                // only when of lower precedence.
                let left_paren = matches!(a.node, Node::Mul(..) | Node::Add(..)) && !(is_add && !same(a));
                let right_paren = matches!(b.node, Node::Add(..)) && !is_add;
                if left_paren {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " {op} ")?;
                if right_paren {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

/// Untyped syntax tree shared by formulas and synthetic connectives.
#[derive(Debug, Clone)]
pub(crate) enum Ast {
    Unit(Polarity, bool),
    Bin { op: char, pos: usize, left: Box<Ast>, right: Box<Ast> },
    Prefix { op: char, pos: usize, arg: Box<Ast> },
    Ident(String, usize),
}

pub(crate) struct AstParser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> AstParser<'a> {
    pub fn new(text: &'a str) -> AstParser<'a> {
        AstParser { text: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, LlpError> {
        Err(LlpError::Syntax { pos: self.pos, message: message.into() })
    }

    fn skip(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.text.get(self.pos).copied()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn finish(&mut self) -> Result<(), LlpError> {
        if self.at_end() {
            Ok(())
        } else {
            self.err(format!("unexpected `{}`", self.text[self.pos] as char))
        }
    }

    pub fn additive(&mut self) -> Result<Ast, LlpError> {
        let left = self.multiplicative()?;
        match self.peek() {
            Some(c @ (b'+' | b'&')) => {
                let pos = self.pos;
                self.pos += 1;
                let right = self.additive()?;
                Ok(Ast::Bin { op: c as char, pos, left: Box::new(left), right: Box::new(right) })
            }
            _ => Ok(left),
        }
    }

    fn multiplicative(&mut self) -> Result<Ast, LlpError> {
        let left = self.unary()?;
        match self.peek() {
            Some(c @ (b'*' | b'|')) => {
                let pos = self.pos;
                self.pos += 1;
                let right = self.multiplicative()?;
                Ok(Ast::Bin { op: c as char, pos, left: Box::new(left), right: Box::new(right) })
            }
            _ => Ok(left),
        }
    }

    fn unary(&mut self) -> Result<Ast, LlpError> {
        let Some(c) = self.peek() else { return self.err("unexpected end of input") };
        let pos = self.pos;
        match c {
            b'!' | b'?' => {
                self.pos += 1;
                let arg = self.unary()?;
                Ok(Ast::Prefix { op: c as char, pos, arg: Box::new(arg) })
            }
            b'(' => {
                self.pos += 1;
                let inner = self.additive()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            b'0' | b'1' | b'T' | b'B'
                if !self.text.get(pos + 1).is_some_and(|n| n.is_ascii_alphanumeric() || *n == b'_') =>
            {
                self.pos += 1;
                Ok(match c {
                    b'0' => Ast::Unit(Polarity::Positive, false),
                    b'1' => Ast::Unit(Polarity::Positive, true),
                    b'T' => Ast::Unit(Polarity::Negative, false),
                    _ => Ast::Unit(Polarity::Negative, true),
                })
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.text.len() && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_') {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.text[pos..self.pos]).expect("ascii").to_string();
                Ok(Ast::Ident(s, pos))
            }
            _ => self.err(format!("unexpected `{}`", c as char)),
        }
    }
}

fn op_polarity(op: char) -> Polarity {
    match op {
        '*' | '+' | '!' => Polarity::Positive,
        _ => Polarity::Negative,
    }
}

fn formula_of(ast: &Ast) -> Result<Formula, LlpError> {
    match ast {
        Ast::Unit(p, m) => Ok(Formula::unit(*p, *m)),
        Ast::Ident(s, pos) => Err(LlpError::Syntax { pos: *pos, message: format!("unknown atom `{s}`") }),
        Ast::Prefix { op, arg, .. } => {
            let a = formula_of(arg)?;
            if *op == '!' {
                Formula::bang(a)
            } else {
                Formula::quest(a)
            }
        }
        Ast::Bin { op, left, right, .. } => {
            let (a, b) = (formula_of(left)?, formula_of(right)?);
            let want = op_polarity(*op);
            if a.polarity != want || b.polarity != want {
                return Err(LlpError::Polarity(format!(
                    "`{op}` expects {} operands, found `{a}` and `{b}`",
                    if want == Polarity::Positive { "positive" } else { "negative" }
                )));
            }
            if matches!(op, '*' | '|') {
                Formula::mul(a, b)
            } else {
                Formula::add(a, b)
            }
        }
    }
}

pub fn parse_llp(text: &str) -> Result<Formula, LlpError> {
    let mut p = AstParser::new(text);
    let ast = p.additive()?;
    p.finish()?;
    formula_of(&ast)
}

/// Comma-separated formulas.
pub fn parse_llp_list(text: &str) -> Result<Vec<Formula>, LlpError> {
    let mut p = AstParser::new(text);
    let mut out = Vec::new();
    if p.at_end() {
        return Ok(out);
    }
    loop {
        out.push(formula_of(&p.additive()?)?);
        if !p.eat(b',') {
            break;
        }
    }
    p.finish()?;
    Ok(out)
}

pub fn llp_dual(f: &Formula) -> Formula {
    f.dual()
}

/// Every formula of the polarity with exactly `size` nodes, in a fixed
/// order.
pub fn enumerate_formulas(polarity: Polarity, size: usize) -> Vec<Formula> {
    let mut memo = std::collections::HashMap::new();
    formulas_exact(polarity, size, &mut memo)
}

/// Every formula of the polarity with at most `size` nodes, smallest first.
pub fn formulas_up_to(polarity: Polarity, size: usize) -> Vec<Formula> {
    (1..=size).flat_map(|s| enumerate_formulas(polarity, s)).collect()
}

fn formulas_exact(
    pol: Polarity,
    size: usize,
    memo: &mut std::collections::HashMap<(Polarity, usize), Vec<Formula>>,
) -> Vec<Formula> {
    if let Some(v) = memo.get(&(pol, size)) {
        return v.clone();
    }
    let mut out = Vec::new();
    match size {
        0 => {}
        1 => {
            out.push(Formula::unit(pol, false));
            out.push(Formula::unit(pol, true));
        }
        _ => {
            for mul in [true, false] {
                for l in 1..size - 1 {
                    let left = formulas_exact(pol, l, memo);
                    let right = formulas_exact(pol, size - 1 - l, memo);
                    for a in &left {
                        for b in &right {
                            out.push(Formula::binary(mul, a.clone(), b.clone()).expect("same polarity"));
                        }
                    }
                }
            }
            for a in formulas_exact(pol.flip(), size - 1, memo) {
                out.push(Formula::shift(a));
            }
        }
    }
    memo.insert((pol, size), out.clone());
    out
}
