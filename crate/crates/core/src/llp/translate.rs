use crate::behaviour::{Action, Behaviour, Connective, Context};
use crate::design::{Name, Polarity, Var};

use super::{synthetic_decompose, Formula, Layer, LlpError, Node, StrictSequent, SyntheticConnective};

/// Negative actions of a layer read negatively.
fn actions(l: &Layer) -> Vec<(Name, Vec<Var>)> {
    match l {
        Layer::Zero => vec![],
        Layer::One => vec![(Name::star(), vec![])],
        Layer::Leaf(x) => vec![(Name::up(), vec![x.clone()])],
        Layer::Mul(a, b) => {
            let (xs, ys) = (actions(a), actions(b));
            let mut out = Vec::new();
            for (n, u) in &xs {
                for (m, v) in &ys {
                    out.push((Name::wp(n, m), u.iter().chain(v).cloned().collect()));
                }
            }
            out
        }
        Layer::Add(a, b) => {
            let left = actions(a).into_iter().map(|(n, u)| (Name::pi1(&n), u));
            let right = actions(b).into_iter().map(|(m, v)| (Name::pi2(&m), v));
            left.chain(right).collect()
        }
    }
}

/// The logical connective of a synthetic connective; both polarities
/// share the actions of the negative reading.
pub fn bullet_connective(c: &SyntheticConnective) -> Connective {
    let acts = actions(c.layer()).into_iter().map(|(name, vars)| Action { name, vars }).collect();
    Connective::new(c.params().to_vec(), acts).expect("disjoint layers give well-formed connectives")
}

/// Translation of a formula into a logical behaviour of the same polarity.
pub fn bullet(f: &Formula) -> Result<Behaviour, LlpError> {
    let (c, args) = synthetic_decompose(f)?;
    let args = args.iter().map(bullet).collect::<Result<Vec<_>, _>>()?;
    Behaviour::new(f.polarity(), bullet_connective(&c), args).map_err(|e| LlpError::Translation(e.to_string()))
}

/// Converse translation: `&` over the actions of `⅋` over their `?x`.
pub fn circ(b: &Behaviour) -> Formula {
    let conn = b.connective();
    let action_layer = |a: &Action| -> Layer {
        let mut leaves = a.vars.iter().rev().map(|x| Layer::Leaf(x.clone()));
        match leaves.next() {
            None => Layer::One,
            Some(last) => leaves.fold(last, |acc, l| Layer::Mul(Box::new(l), Box::new(acc))),
        }
    };
    let mut layers = conn.actions().iter().rev().map(action_layer);
    let layer = match layers.next() {
        None => Layer::Zero,
        Some(last) => layers.fold(last, |acc, l| Layer::Add(Box::new(l), Box::new(acc))),
    };
    let synthetic = SyntheticConnective::new(b.polarity(), layer).expect("action variables are distinct");
    let args: Vec<Formula> = synthetic.params().iter().map(|x| circ(b.arg_for(x))).collect();
    synthetic.apply(&args).expect("arguments have the opposite polarity")
}

/// `?P°` for each context entry, and the negative slot as the remaining
/// formula.
pub fn circ_context(ctx: &Context) -> StrictSequent {
    StrictSequent {
        gamma: ctx.pos.iter().map(|(_, b)| circ(b)).collect(),
        d: ctx.neg.as_ref().map(circ),
    }
}

/// Normal form of a formula up to associativity, commutativity, units and
/// the distribution of multiplicatives over additives within a layer: the
/// multiset of additive alternatives, each the multiset of its shifted
/// arguments.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Shape {
    pub polarity: Polarity,
    pub alternatives: Vec<Vec<Shape>>,
}

pub fn normal_shape(f: &Formula) -> Shape {
    fn alts(f: &Formula) -> Vec<Vec<Shape>> {
        match f.node() {
            Node::Zero => vec![],
            Node::One => vec![vec![]],
            Node::Shift(a) => vec![vec![normal_shape(a)]],
            Node::Add(a, b) => {
                let mut out = alts(a);
                out.extend(alts(b));
                out
            }
            Node::Mul(a, b) => {
                let (xs, ys) = (alts(a), alts(b));
                let mut out = Vec::new();
                for x in &xs {
                    for y in &ys {
                        out.push(x.iter().chain(y).cloned().collect());
                    }
                }
                out
            }
        }
    }
    let mut alternatives = alts(f);
    for a in &mut alternatives {
        a.sort();
    }
    alternatives.sort();
    Shape { polarity: f.polarity(), alternatives }
}

/// Isomorphism in the sense of [`normal_shape`].
pub fn isomorphic(f: &Formula, g: &Formula) -> bool {
    normal_shape(f) == normal_shape(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behaviour::BehaviourPrinter;
    use crate::llp::parse_llp;

    fn acts(f: &str) -> Vec<String> {
        let b = bullet(&parse_llp(f).unwrap()).unwrap();
        b.connective()
            .actions()
            .iter()
            .map(|a| {
                let vs: Vec<&str> = a.vars.iter().map(|v| v.as_str()).collect();
                format!("{}({})", a.name, vs.join(","))
            })
            .collect()
    }

    #[test]
    fn clauses() {
        assert!(acts("T").is_empty());
        assert_eq!(acts("B"), vec!["*()"]);
        assert_eq!(acts("?1"), vec!["up(x1)"]);
        assert_eq!(
            acts("B | (?1 | (?0 & ?(1 * 1)))"),
            vec!["wp[*,wp[up,pi1[up]]](x1,x2)", "wp[*,wp[up,pi2[up]]](x1,x3)"]
        );
        assert_eq!(acts("1 * (!B * (!T + !(B | T)))"), acts("B | (?1 | (?0 & ?(1 * 1)))"));
    }

    #[test]
    fn polarity_and_library_shapes() {
        let mut p = BehaviourPrinter::new();
        let b = bullet(&parse_llp("!(?1)").unwrap()).unwrap();
        assert_eq!(b.polarity(), Polarity::Positive);
        assert_eq!(p.behaviour(&b), "down(up(one))");
        assert_eq!(bullet(&parse_llp("0").unwrap()).unwrap(), Behaviour::zero());
    }

    #[test]
    fn deterministic_names() {
        let f = parse_llp("?1 | (?0 & B) | ?(1 + 0)").unwrap();
        assert_eq!(bullet(&f).unwrap().key(), bullet(&f).unwrap().key());
    }

    #[test]
    fn circ_clauses() {
        assert_eq!(circ(&Behaviour::top()).to_string(), "T");
        assert_eq!(circ(&Behaviour::bot()).to_string(), "B");
        assert_eq!(circ(&Behaviour::down(Behaviour::up(Behaviour::one()))).to_string(), "!?1");
        let f = parse_llp("1 * (!B * (!T + !(B | T)))").unwrap();
        let back = circ(&bullet(&f).unwrap());
        assert_eq!(back.to_string(), "!B * !T + !B * !T");
        assert!(isomorphic(&f, &back));
        assert!(!isomorphic(&f, &parse_llp("!B * !T").unwrap()));
        let g = parse_llp("!B * (!T + !(B | T))").unwrap();
        assert!(isomorphic(&g, &parse_llp("!T * !B + !(T | B) * !B").unwrap()));
    }
}
