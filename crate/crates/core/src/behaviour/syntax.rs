use crate::design::{Polarity, Signature};
use crate::syntax::{ParseError, Parser, Tok};

use super::{Action, Behaviour, BehaviourError, Connective, Context};

impl Parser {
    /// `conn IDENT ( vars? ) { NAME ( vars? ) ... }`
    pub(crate) fn conn_decl(&mut self) -> Result<(), ParseError> {
        self.expect_word("conn")?;
        let label = self.ident()?;
        let params = self.vars()?;
        self.expect_sym("{")?;
        let mut actions = Vec::new();
        while !self.eat_sym("}") {
            let name = self.name()?;
            let vars = if self.is_sym("(") { self.vars()? } else { Vec::new() };
            self.use_name(&name, vars.len())?;
            actions.push(Action { name, vars });
            if !self.eat_sym(",") {
                self.eat_sym(";");
            }
        }
        let conn = match Connective::new(params, actions) {
            Ok(c) => c.labelled(&label),
            Err(e) => return self.behaviour_error(e),
        };
        if self.conns.insert(label.clone(), conn).is_some() {
            return self.error(format!("connective `{label}` declared twice"));
        }
        Ok(())
    }

    fn behaviour_error<T>(&self, e: BehaviourError) -> Result<T, ParseError> {
        self.error(e.to_string())
    }

    fn declare_actions(&mut self, c: &Connective) -> Result<(), ParseError> {
        for a in c.actions() {
            self.use_name(&a.name, a.vars.len())?;
        }
        Ok(())
    }

    fn custom(&mut self, polarity: Polarity) -> Result<Behaviour, ParseError> {
        let label = self.ident()?;
        let Some(conn) = self.conns.get(&label).cloned() else {
            return self.error(format!("unknown connective `{label}`"));
        };
        let (open, close) = if polarity == Polarity::Positive { ("<", ">") } else { ("(", ")") };
        self.expect_sym(open)?;
        let mut args = Vec::new();
        if !self.eat_sym(close) {
            loop {
                args.push(self.behaviour(polarity.flip())?);
                if self.eat_sym(close) {
                    break;
                }
                self.expect_sym(",")?;
            }
        }
        Behaviour::new(polarity, conn, args).or_else(|e| self.behaviour_error(e))
    }

    fn library(&mut self, polarity: Polarity, conn: Connective) -> Result<Behaviour, ParseError> {
        self.declare_actions(&conn)?;
        let mut args = Vec::new();
        if conn.arity() > 0 {
            self.expect_sym("(")?;
            for i in 0..conn.arity() {
                if i > 0 {
                    self.expect_sym(",")?;
                }
                args.push(self.behaviour(polarity.flip())?);
            }
            self.expect_sym(")")?;
        }
        Behaviour::new(polarity, conn, args).or_else(|e| self.behaviour_error(e))
    }

    pub(crate) fn behaviour(&mut self, polarity: Polarity) -> Result<Behaviour, ParseError> {
        let word = match self.peek() {
            Tok::Ident(s) => s.clone(),
            other => return self.error(format!("expected a behaviour, found {other}")),
        };
        let conn = match (polarity, word.as_str()) {
            (Polarity::Positive, "pos") | (Polarity::Negative, "neg") => {
                self.ident()?;
                return self.custom(polarity);
            }
            (Polarity::Positive, "one") | (Polarity::Negative, "bot") => Connective::bot(),
            (Polarity::Positive, "zero") | (Polarity::Negative, "top") => Connective::top(),
            (Polarity::Positive, "down") | (Polarity::Negative, "up") => Connective::up(),
            (Polarity::Positive, "tensor") | (Polarity::Negative, "par") => Connective::par(),
            (Polarity::Positive, "plus") | (Polarity::Negative, "with") => Connective::with(),
            _ => return self.error(format!("expected a {polarity} behaviour, found `{word}`")),
        };
        self.ident()?;
        self.library(polarity, conn)
    }

    fn starts_negative(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if matches!(s.as_str(), "neg" | "bot" | "top" | "up" | "par" | "with"))
            && !matches!(self.peek_at(1), Tok::Sym(":"))
    }

    /// `x:BPOS, y:BPOS [, BNEG]`; an empty context is allowed.
    pub(crate) fn context(&mut self) -> Result<Context, ParseError> {
        let mut ctx = Context::new();
        if self.at_end() {
            return Ok(ctx);
        }
        loop {
            if self.starts_negative() {
                if ctx.neg.is_some() {
                    return self.error("a context has at most one negative behaviour");
                }
                ctx.neg = Some(self.behaviour(Polarity::Negative)?);
            } else {
                let v = self.variable()?;
                self.expect_sym(":")?;
                let b = self.behaviour(Polarity::Positive)?;
                if ctx.contains(&v) {
                    return self.behaviour_error(BehaviourError::DuplicateContextVar(v));
                }
                ctx.pos.push((v, b));
            }
            if !self.eat_sym(",") {
                return Ok(ctx);
            }
        }
    }
}

/// Parses a behaviour of the given polarity, preceded by `conn`
/// declarations.
pub fn parse_behaviour(text: &str, polarity: Polarity) -> Result<(Behaviour, Signature), ParseError> {
    let mut p = Parser::new(text, &Signature::new())?;
    p.declarations()?;
    let b = p.behaviour(polarity)?;
    p.expect_end()?;
    Ok((b, p.sig.clone()))
}

/// Parses a context, preceded by `conn` declarations.
pub fn parse_context(text: &str) -> Result<(Context, Signature), ParseError> {
    let mut p = Parser::new(text, &Signature::new())?;
    p.declarations()?;
    let ctx = p.context()?;
    p.expect_end()?;
    Ok((ctx, p.sig.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sugar_and_custom() {
        let (b, _) = parse_behaviour("down(with(one, tensor(bot, top)))", Polarity::Positive).unwrap();
        let expected = Behaviour::down(Behaviour::with(
            Behaviour::one(),
            Behaviour::tensor(Behaviour::bot(), Behaviour::top()),
        ));
        assert_eq!(b, expected);
        let (c, sig) =
            parse_behaviour("conn alpha(x, y) { a(x, y) b(y) } pos alpha<top, bot>", Polarity::Positive).unwrap();
        assert_eq!(c.connective().label(), Some("alpha"));
        assert_eq!(sig.arity(&crate::design::Name::new("a")), Some(2));
        assert!(parse_behaviour("down(one)", Polarity::Positive).is_err());
    }

    #[test]
    fn contexts() {
        let (ctx, _) = parse_context("x: one, y: down(top), with(one, zero)").unwrap();
        assert_eq!(ctx.pos.len(), 2);
        assert_eq!(ctx.neg, Some(Behaviour::with(Behaviour::one(), Behaviour::zero())));
        assert!(parse_context("x: one, x: one").is_err());
        assert!(parse_context("bot, top").is_err());
    }
}
