use super::Ltl;

/// Negation normal form of `f`: `->` eliminated, `!` pushed onto atoms.
pub fn to_nnf(f: &Ltl) -> Ltl {
    push(f, false)
}

/// Negation normal form of `!f`.
pub fn negate_to_nnf(f: &Ltl) -> Ltl {
    push(f, true)
}

fn push(f: &Ltl, neg: bool) -> Ltl {
    match (f, neg) {
        (Ltl::True, false) | (Ltl::False, true) => Ltl::True,
        (Ltl::True, true) | (Ltl::False, false) => Ltl::False,
        (Ltl::Atom(n), false) => Ltl::Atom(n.clone()),
        (Ltl::Atom(n), true) => Ltl::not(Ltl::Atom(n.clone())),
        (Ltl::Not(a), _) => push(a, !neg),
        (Ltl::And(a, b), false) | (Ltl::Or(a, b), true) => Ltl::and(push(a, neg), push(b, neg)),
        (Ltl::Or(a, b), false) | (Ltl::And(a, b), true) => Ltl::or(push(a, neg), push(b, neg)),
        (Ltl::Implies(a, b), false) => Ltl::or(push(a, true), push(b, false)),
        (Ltl::Implies(a, b), true) => Ltl::and(push(a, false), push(b, true)),
        (Ltl::Next(a), _) => Ltl::next(push(a, neg)),
        (Ltl::Until(a, b), false) | (Ltl::Release(a, b), true) => {
            Ltl::until(push(a, neg), push(b, neg))
        }
        (Ltl::Release(a, b), false) | (Ltl::Until(a, b), true) => {
            Ltl::release(push(a, neg), push(b, neg))
        }
        (Ltl::Eventually(a), false) | (Ltl::Globally(a), true) => Ltl::eventually(push(a, neg)),
        (Ltl::Globally(a), false) | (Ltl::Eventually(a), true) => Ltl::globally(push(a, neg)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    #[test]
    fn globally_dualizes() {
        let f = parse("G p").unwrap();
        assert_eq!(negate_to_nnf(&f), parse("F !p").unwrap());
    }

    #[test]
    fn next_is_self_dual() {
        let f = parse("X p").unwrap();
        assert_eq!(negate_to_nnf(&f), parse("X !p").unwrap());
    }

    #[test]
    fn double_negation() {
        let f = parse("!p").unwrap();
        assert_eq!(negate_to_nnf(&f), parse("p").unwrap());
        assert_eq!(to_nnf(&parse("!!p").unwrap()), parse("p").unwrap());
    }

    #[test]
    fn until_release_duality() {
        let f = parse("!(a U !b)").unwrap();
        assert_eq!(to_nnf(&f), parse("!a R b").unwrap());
        let g = parse("a -> b").unwrap();
        assert_eq!(negate_to_nnf(&g), parse("a && !b").unwrap());
    }
}
