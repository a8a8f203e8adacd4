use super::{Branch, Design, DesignError, DefId, DefSystem, Polarity, Signature, Var};

/// The infinitary eta-expansion of `x`:
/// `eta(x) = { a(y1..yn) => x | a<eta(y1), .., eta(yn)> ; .. }` over every
/// name of the signature.
pub fn fax(sig: &Signature, x: &Var) -> Result<(Design, DefSystem), DesignError> {
    if sig.is_schematic() {
        return Err(DesignError::SchematicSignature);
    }
    let defs = DefSystem::new();
    let eta = DefId::new("eta");
    let param = Var::new("x");
    let body = Design::Sum(
        sig.names()
            .map(|(name, arity)| {
                let ys: Vec<Var> = (1..=arity).map(|i| Var::new(&format!("y{i}"))).collect();
                let args = ys.iter().map(|y| Design::Ref(eta.clone(), vec![y.clone()])).collect();
                (name.clone(), Branch::new(ys, Design::pred(Design::Var(param.clone()), name.clone(), args)))
            })
            .collect(),
    );
    defs.insert_trusted(eta.clone(), vec![param], body, Polarity::Negative);
    Ok((Design::Ref(eta, vec![x.clone()]), defs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{classify, equiv, Cardinality, Name};

    #[test]
    fn nullary_instance() {
        let sig = Signature::from_arities([("a", 0)]).unwrap();
        let (d, defs) = fax(&sig, &Var::new("z")).unwrap();
        let expected = Design::sum([(Name::new("a"), Branch::new(vec![], Design::pred(Design::var("z"), Name::new("a"), vec![])))]);
        assert!(equiv(&d.expose_neg(&defs), &expected, &defs));
        assert_eq!(classify(&d, &defs).cardinality, Cardinality::Finite(1));
    }

    #[test]
    fn unary_instance_is_standard_and_infinite() {
        let sig = Signature::from_arities([("a", 1)]).unwrap();
        let (d, defs) = fax(&sig, &Var::new("x")).unwrap();
        let c = classify(&d, &defs);
        assert!(c.standard && c.deterministic && c.identity_free);
        assert_eq!(c.cardinality, Cardinality::Infinite);
    }

    #[test]
    fn schematic_rejected() {
        assert!(fax(&Signature::schematic(), &Var::new("x")).is_err());
    }
}
