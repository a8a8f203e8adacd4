//! Lexer and parser for the design, behaviour and sequent text formats.
//!
//! ```text
//! file   := sigdecl? (def | conn)* expr?
//! sigdecl:= "sig" "{" NAME "/" NAT ("," NAME "/" NAT)* "}"
//! def    := "def" IDENT "(" vars? ")" "=" (pos | neg)
//! pos    := "omega" | "daimon" | pred | IDENT "(" vars? ")" | "/\" "{" pos ("," pos)* "}"
//! pred   := neg "|" NAME ("<" (neg ("," neg)*)? ">")?
//! neg    := VAR | "{" (branch (";" branch)*)? "}" | IDENT "(" vars? ")"
//! branch := NAME ("(" vars? ")")? "=>" pos
//! NAME   := "*" | IDENT | ("pi1" | "pi2") "[" NAME "]" | "wp" "[" NAME "," NAME "]"
//! ```
//!
//! `down` in action position stands for `up`. Variables may not start with
//! `_`, and `x0` is never a name. `#` starts a line comment.

use std::collections::BTreeMap;
use std::fmt;

use crate::behaviour::Connective;
use crate::design::{Branch, DefId, DefSystem, Design, DesignError, Name, Polarity, Signature, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Nat(usize),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const SYMBOLS: &[&str] = &["/\\", "|-", "=>", "{", "}", "(", ")", "<", ">", "[", "]", ",", ";", ":", "=", "|", "/", "*"];

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start_col = col;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line, col: start_col });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            let n = s.parse().map_err(|_| ParseError { line, col: start_col, message: "number too large".into() })?;
            out.push(Token { tok: Tok::Nat(n), line, col: start_col });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                i += s.len();
                col += s.len();
                out.push(Token { tok: Tok::Sym(s), line, col: start_col });
            }
            None => return Err(ParseError { line, col, message: format!("unexpected character `{c}`") }),
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const KEYWORDS: &[&str] = &["omega", "daimon", "sig", "def", "conn"];

/// A parsed input file.
#[derive(Debug, Default)]
pub struct Document {
    pub sig: Signature,
    pub defs: DefSystem,
    pub conns: BTreeMap<String, Connective>,
    pub expr: Option<Design>,
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    pub sig: Signature,
    strict: bool,
    pub defs: DefSystem,
    pending: Vec<(DefId, Vec<Var>, Design)>,
    pub conns: BTreeMap<String, Connective>,
}

impl Parser {
    pub fn new(text: &str, sig: &Signature) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            sig: sig.clone(),
            strict: false,
            defs: DefSystem::new(),
            pending: Vec::new(),
            conns: BTreeMap::new(),
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, message: message.into() })
    }

    pub fn design_error<T>(&self, e: DesignError) -> Result<T, ParseError> {
        self.error(e.to_string())
    }

    pub fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    pub fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == w)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error(format!("expected `{s}`, found {}", self.peek()))
        }
    }

    pub fn expect_word(&mut self, w: &str) -> Result<(), ParseError> {
        if self.is_word(w) {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected `{w}`, found {}", self.peek()))
        }
    }

    pub fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => self.error(format!("expected an identifier, found {other}")),
        }
    }

    pub fn nat(&mut self) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Nat(n) => {
                self.advance();
                Ok(n)
            }
            other => self.error(format!("expected a number, found {other}")),
        }
    }

    pub fn at_end(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.error(format!("unexpected {}", self.peek()))
        }
    }

    pub fn variable(&mut self) -> Result<Var, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s.starts_with('_') => self.error(format!("`{s}`: variables starting with `_` are reserved")),
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => self.error(format!("`{s}` is a keyword")),
            Tok::Ident(s) => {
                self.advance();
                Ok(Var::new(&s))
            }
            other => self.error(format!("expected a variable, found {other}")),
        }
    }

    /// `( vars? )` with distinct variables.
    pub fn vars(&mut self) -> Result<Vec<Var>, ParseError> {
        self.expect_sym("(")?;
        let mut out: Vec<Var> = Vec::new();
        if !self.eat_sym(")") {
            loop {
                let v = self.variable()?;
                if out.contains(&v) {
                    return self.design_error(DesignError::DuplicateBinder(v));
                }
                out.push(v);
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(out)
    }

    pub fn name(&mut self) -> Result<Name, ParseError> {
        if self.eat_sym("*") {
            return Ok(Name::star());
        }
        let s = self.ident()?;
        if s == "x0" {
            return self.design_error(DesignError::ReservedName);
        }
        if (s == "pi1" || s == "pi2" || s == "wp") && self.is_sym("[") {
            self.advance();
            let a = self.name()?;
            let n = if s == "wp" {
                self.expect_sym(",")?;
                let b = self.name()?;
                Name::wp(&a, &b)
            } else if s == "pi1" {
                Name::pi1(&a)
            } else {
                Name::pi2(&a)
            };
            self.expect_sym("]")?;
            return Ok(n);
        }
        Ok(Name::new(&s))
    }

    /// Checks (or, without a `sig` declaration, infers) the arity of a name.
    pub fn use_name(&mut self, name: &Name, arity: usize) -> Result<(), ParseError> {
        if self.strict && !self.sig.contains(name) && self.sig.arity(name).is_none() {
            return self.design_error(DesignError::UnknownName(name.clone()));
        }
        match self.sig.declare(name, arity) {
            Ok(()) => Ok(()),
            Err(e) => self.design_error(e),
        }
    }

    fn sigdecl(&mut self) -> Result<(), ParseError> {
        self.expect_word("sig")?;
        self.expect_sym("{")?;
        self.strict = true;
        if !self.eat_sym("}") {
            loop {
                let n = self.name()?;
                self.expect_sym("/")?;
                let a = self.nat()?;
                if let Err(e) = self.sig.declare(&n, a) {
                    return self.design_error(e);
                }
                if self.eat_sym("}") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(())
    }

    fn def(&mut self) -> Result<(), ParseError> {
        self.expect_word("def")?;
        let id = self.ident()?;
        let params = self.vars()?;
        self.expect_sym("=")?;
        let body = self.any()?;
        self.pending.push((DefId::new(&id), params, body));
        Ok(())
    }

    /// Declarations: `sig`, `def` and `conn` items in any order.
    pub fn declarations(&mut self) -> Result<(), ParseError> {
        loop {
            if self.is_word("sig") {
                self.sigdecl()?;
            } else if self.is_word("def") {
                self.def()?;
            } else if self.is_word("conn") {
                self.conn_decl()?;
            } else {
                return Ok(());
            }
        }
    }

    /// Installs the collected definitions.
    pub fn close_defs(&mut self) -> Result<(), ParseError> {
        let group = std::mem::take(&mut self.pending);
        match self.defs.define_all(group) {
            Ok(()) => Ok(()),
            Err(e) => self.design_error(e),
        }
    }

    /// Checks references of a top-level design.
    pub fn check_refs(&self, d: &Design) -> Result<(), ParseError> {
        let expected = match d {
            Design::Ref(id, _) => match self.defs.polarity(id) {
                Some(p) => p,
                None => return self.design_error(DesignError::UnboundDef(id.clone())),
            },
            other => other.polarity(&self.defs).unwrap_or(Polarity::Positive),
        };
        match self.defs.check_design(d, expected) {
            Ok(()) => Ok(()),
            Err(e) => self.design_error(e),
        }
    }

    /// Any design: positive or negative.
    pub fn any(&mut self) -> Result<Design, ParseError> {
        if self.is_word("omega") {
            self.advance();
            return Ok(Design::Omega);
        }
        if self.is_word("daimon") {
            self.advance();
            return Ok(Design::daimon());
        }
        if self.eat_sym("/\\") {
            self.expect_sym("{")?;
            let mut items = Vec::new();
            if !self.eat_sym("}") {
                loop {
                    items.push(self.positive()?);
                    if self.eat_sym("}") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
            return Ok(Design::conj(items));
        }
        let head = self.negative()?;
        if !self.eat_sym("|") {
            return Ok(head);
        }
        let mut name = self.name()?;
        if name.as_str() == "down" {
            name = Name::up();
        }
        let mut args = Vec::new();
        if self.eat_sym("<") {
            if !self.eat_sym(">") {
                loop {
                    args.push(self.negative()?);
                    if self.eat_sym(">") {
                        break;
                    }
                    self.expect_sym(",")?;
                }
            }
        }
        self.use_name(&name, args.len())?;
        Ok(Design::pred(head, name, args))
    }

    pub fn positive(&mut self) -> Result<Design, ParseError> {
        let d = self.any()?;
        match d {
            Design::Var(_) | Design::Sum(_) => self.error("expected a positive design"),
            other => Ok(other),
        }
    }

    pub fn negative(&mut self) -> Result<Design, ParseError> {
        if self.eat_sym("{") {
            let mut branches = BTreeMap::new();
            if !self.eat_sym("}") {
                loop {
                    let name = self.name()?;
                    let vars = if self.is_sym("(") { self.vars()? } else { Vec::new() };
                    self.expect_sym("=>")?;
                    let body = self.positive()?;
                    self.use_name(&name, vars.len())?;
                    if branches.insert(name.clone(), Branch::new(vars, body)).is_some() {
                        return self.error(format!("duplicate branch `{name}`"));
                    }
                    if self.eat_sym("}") {
                        break;
                    }
                    self.expect_sym(";")?;
                    if self.eat_sym("}") {
                        break;
                    }
                }
            }
            return Ok(Design::Sum(branches));
        }
        if matches!(self.peek(), Tok::Ident(_)) && matches!(self.peek_at(1), Tok::Sym("(")) {
            let id = self.ident()?;
            let args = self.ref_args()?;
            return Ok(Design::Ref(DefId::new(&id), args));
        }
        Ok(Design::Var(self.variable()?))
    }

    fn ref_args(&mut self) -> Result<Vec<Var>, ParseError> {
        self.expect_sym("(")?;
        let mut out = Vec::new();
        if !self.eat_sym(")") {
            loop {
                out.push(self.variable()?);
                if self.eat_sym(")") {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Ok(out)
    }

    pub fn into_document(self, expr: Option<Design>) -> Document {
        Document { sig: self.sig, defs: self.defs, conns: self.conns, expr }
    }
}

/// Parses a file of declarations followed by an optional design.
pub fn parse_document(text: &str, sig: &Signature) -> Result<Document, ParseError> {
    let mut p = Parser::new(text, sig)?;
    p.declarations()?;
    p.close_defs()?;
    let expr = if p.at_end() { None } else { Some(p.any()?) };
    p.expect_end()?;
    if let Some(d) = &expr {
        p.check_refs(d)?;
    }
    Ok(p.into_document(expr))
}

/// Parses a design together with its definitions.
pub fn parse_design(text: &str, sig: &Signature) -> Result<(Design, DefSystem), ParseError> {
    let doc = parse_document(text, sig)?;
    match doc.expr {
        Some(d) => Ok((d, doc.defs)),
        None => Err(ParseError { line: 1, col: 1, message: "expected a design".into() }),
    }
}
