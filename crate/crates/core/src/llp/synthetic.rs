use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::design::{Polarity, Var};

use super::{op_polarity, Ast, AstParser, Formula, LlpError, Node};

/// One polarity layer of connectives over variables; leaves read `!x` on
/// the positive side and `?x` on the negative side.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Layer {
    Zero,
    One,
    Mul(Box<Layer>, Box<Layer>),
    Add(Box<Layer>, Box<Layer>),
    Leaf(Var),
}

impl Layer {
    pub fn vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Layer::Zero | Layer::One => {}
            Layer::Mul(a, b) | Layer::Add(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Layer::Leaf(x) => {
                out.insert(x.clone());
            }
        }
    }

    fn first_occurrences(&self, out: &mut Vec<Var>) {
        match self {
            Layer::Zero | Layer::One => {}
            Layer::Mul(a, b) | Layer::Add(a, b) => {
                a.first_occurrences(out);
                b.first_occurrences(out);
            }
            Layer::Leaf(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
        }
    }

    fn check_disjoint(&self) -> Result<(), LlpError> {
        match self {
            Layer::Zero | Layer::One | Layer::Leaf(_) => Ok(()),
            Layer::Add(a, b) => {
                a.check_disjoint()?;
                b.check_disjoint()
            }
            Layer::Mul(a, b) => {
                a.check_disjoint()?;
                b.check_disjoint()?;
                let (mut va, mut vb) = (BTreeSet::new(), BTreeSet::new());
                a.vars(&mut va);
                b.vars(&mut vb);
                match va.intersection(&vb).next() {
                    Some(x) => Err(LlpError::Disjointness(x.to_string())),
                    None => Ok(()),
                }
            }
        }
    }
}

/// A synthetic connective: a layer whose multiplicatives have disjoint
/// variable sets on their two sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SyntheticConnective {
    polarity: Polarity,
    layer: Layer,
    params: Vec<Var>,
}

impl SyntheticConnective {
    pub fn new(polarity: Polarity, layer: Layer) -> Result<SyntheticConnective, LlpError> {
        layer.check_disjoint()?;
        let mut params = Vec::new();
        layer.first_occurrences(&mut params);
        Ok(SyntheticConnective { polarity, layer, params })
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    /// Variables in order of first occurrence.
    pub fn params(&self) -> &[Var] {
        &self.params
    }

    /// Same layer read with the opposite polarity.
    pub fn dual(&self) -> SyntheticConnective {
        SyntheticConnective { polarity: self.polarity.flip(), ..self.clone() }
    }

    /// Substitutes formulas of the opposite polarity for the parameters.
    pub fn apply(&self, args: &[Formula]) -> Result<Formula, LlpError> {
        if args.len() != self.params.len() {
            return Err(LlpError::Translation(format!("expected {} arguments, found {}", self.params.len(), args.len())));
        }
        if let Some(a) = args.iter().find(|a| a.polarity() == self.polarity) {
            return Err(LlpError::Polarity(format!("argument `{a}` has the polarity of the connective")));
        }
        let map: BTreeMap<&Var, &Formula> = self.params.iter().zip(args).collect();
        Ok(self.fill(&self.layer, &map))
    }

    fn fill(&self, l: &Layer, map: &BTreeMap<&Var, &Formula>) -> Formula {
        match l {
            Layer::Zero => Formula::unit(self.polarity, false),
            Layer::One => Formula::unit(self.polarity, true),
            Layer::Mul(a, b) => Formula::mul(self.fill(a, map), self.fill(b, map)).expect("same polarity"),
            Layer::Add(a, b) => Formula::add(self.fill(a, map), self.fill(b, map)).expect("same polarity"),
            Layer::Leaf(x) => Formula::shift(map[x].clone()),
        }
    }
}

impl fmt::Display for SyntheticConnective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(l: &Layer, pol: Polarity, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let pos = pol == Polarity::Positive;
            match l {
                Layer::Zero => f.write_str(if pos { "0" } else { "T" }),
                Layer::One => f.write_str(if pos { "1" } else { "B" }),
                Layer::Leaf(x) => write!(f, "{}{x}", if pos { "!" } else { "?" }),
                Layer::Mul(a, b) | Layer::Add(a, b) => {
                    let op = match (l, pos) {
                        (Layer::Mul(..), true) => "*",
                        (Layer::Mul(..), false) => "|",
                        (_, true) => "+",
                        (_, false) => "&",
                    };
                    let paren = |x: &Layer| matches!(x, Layer::Mul(..) | Layer::Add(..));
                    for (i, side) in [a, b].into_iter().enumerate() {
                        if i == 1 {
                            write!(f, " {op} ")?;
                        }
                        if paren(side) {
                            f.write_str("(")?;
                            go(side, pol, f)?;
                            f.write_str(")")?;
                        } else {
                            go(side, pol, f)?;
                        }
                    }
                    Ok(())
                }
            }
        }
        go(&self.layer, self.polarity, f)
    }
}

fn layer_of(ast: &Ast) -> Result<(Option<Polarity>, Layer), LlpError> {
    let agree = |a: Option<Polarity>, b: Option<Polarity>, pos: usize| match (a, b) {
        (Some(x), Some(y)) if x != y => Err(LlpError::Polarity(format!("mixed polarities at offset {pos}"))),
        (x, y) => Ok(x.or(y)),
    };
    match ast {
        Ast::Unit(p, m) => Ok((Some(*p), if *m { Layer::One } else { Layer::Zero })),
        Ast::Ident(s, pos) => Err(LlpError::Syntax { pos: *pos, message: format!("variable `{s}` needs `!` or `?`") }),
        Ast::Prefix { op, pos, arg } => match arg.as_ref() {
            Ast::Ident(s, _) => Ok((Some(op_polarity(*op)), Layer::Leaf(Var::new(s)))),
            _ => Err(LlpError::Syntax { pos: *pos, message: "expected a variable after the prefix".into() }),
        },
        Ast::Bin { op, pos, left, right } => {
            let (pa, a) = layer_of(left)?;
            let (pb, b) = layer_of(right)?;
            let p = agree(agree(pa, pb, *pos)?, Some(op_polarity(*op)), *pos)?;
            let (a, b) = (Box::new(a), Box::new(b));
            Ok((p, if matches!(op, '*' | '|') { Layer::Mul(a, b) } else { Layer::Add(a, b) }))
        }
    }
}

/// Parses a connective expression such as `!x * (!y + !z)`.
pub fn parse_synthetic(text: &str) -> Result<SyntheticConnective, LlpError> {
    let mut p = AstParser::new(text);
    let ast = p.additive()?;
    p.finish()?;
    let (pol, layer) = layer_of(&ast)?;
    SyntheticConnective::new(pol.expect("every layer has a polarity"), layer)
}

/// The outermost layer of `f` and the formulas under its shifts.
///
/// Leaves with equal argument formulas share a variable unless they sit
/// on opposite sides of a multiplicative, where a new variable is used.
pub fn synthetic_decompose(f: &Formula) -> Result<(SyntheticConnective, Vec<Formula>), LlpError> {
    let mut d = Decomposer { args: Vec::new() };
    let layer = d.go(f, &BTreeSet::new());
    let conn = SyntheticConnective::new(f.polarity(), layer)?;
    let args = conn
        .params()
        .iter()
        .map(|x| d.args.iter().find(|(v, _)| v == x).expect("every variable has an argument").1.clone())
        .collect();
    Ok((conn, args))
}

struct Decomposer {
    args: Vec<(Var, Formula)>,
}

impl Decomposer {
    fn go(&mut self, f: &Formula, forbidden: &BTreeSet<Var>) -> Layer {
        match f.node() {
            Node::Zero => Layer::Zero,
            Node::One => Layer::One,
            Node::Add(a, b) => Layer::Add(Box::new(self.go(a, forbidden)), Box::new(self.go(b, forbidden))),
            Node::Mul(a, b) => {
                let left = self.go(a, forbidden);
                let mut avoid = forbidden.clone();
                left.vars(&mut avoid);
                let right = self.go(b, &avoid);
                Layer::Mul(Box::new(left), Box::new(right))
            }
            Node::Shift(arg) => {
                let found = self.args.iter().find(|(v, g)| g == arg.as_ref() && !forbidden.contains(v));
                let x = match found {
                    Some((v, _)) => v.clone(),
                    None => {
                        let v = Var::new(&format!("x{}", self.args.len() + 1));
                        self.args.push((v.clone(), arg.as_ref().clone()));
                        v
                    }
                };
                Layer::Leaf(x)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llp::parse_llp;

    #[test]
    fn running_examples() {
        let f = parse_llp("1 * (!B * (!T + !(B | T)))").unwrap();
        let (c, args) = synthetic_decompose(&f).unwrap();
        assert_eq!(c.to_string(), "1 * (!x1 * (!x2 + !x3))");
        assert_eq!(args.len(), 3);
        assert_eq!(c.apply(&args).unwrap(), f);

        let n = parse_llp("B | (?1 | (?0 & ?(1 * 1)))").unwrap();
        let (c, args) = synthetic_decompose(&n).unwrap();
        assert_eq!(c.to_string(), "B | (?x1 | (?x2 & ?x3))");
        let texts: Vec<String> = args.iter().map(|a| a.to_string()).collect();
        assert_eq!(texts, vec!["1", "0", "1 * 1"]);
    }

    #[test]
    fn constants() {
        let (c, args) = synthetic_decompose(&parse_llp("1").unwrap()).unwrap();
        assert!(args.is_empty());
        assert_eq!(c.layer(), &Layer::One);
    }

    #[test]
    fn disjointness() {
        assert_eq!(parse_synthetic("!x * !x").unwrap_err(), LlpError::Disjointness("x".into()));
        assert!(parse_synthetic("!x + (!y * !y)").is_err());
        assert!(parse_synthetic("!x * (!y + !y)").is_ok());
        assert!(parse_synthetic("?x | ?y & ?x").is_ok());
        assert!(parse_synthetic("!x * ?y").is_err());
    }

    #[test]
    fn sharing() {
        let f = parse_llp("!B + !B * !B").unwrap();
        let (c, args) = synthetic_decompose(&f).unwrap();
        assert_eq!(c.to_string(), "!x1 + (!x1 * !x2)");
        assert_eq!(args.len(), 2);
        assert_eq!(c.apply(&args).unwrap(), f);
    }
}
