mod common;

use common::{all_lassos, satisfies};
use proptest::prelude::*;
use stutterkit::automaton::hoa::{from_hoa, to_hoa};
use stutterkit::automaton::{accepts_lasso, complement, degeneralize, reduce};
use stutterkit::gen::{random_formula, rng, FormulaShape};
use stutterkit::ltl::{negate_to_nnf, to_nnf};
use stutterkit::{parse, translate, Limits};

fn formula(seed: u64, atoms: usize) -> stutterkit::Ltl {
    random_formula(
        &mut rng(seed),
        FormulaShape {
            atoms,
            temporal_depth: 3,
            size: 7,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn automaton_agrees_with_semantics(seed in any::<u64>(), atoms in 1usize..=2) {
        let f = formula(seed, atoms);
        let a = translate(&f, &Limits::default()).unwrap();
        let ap = a.ap().to_vec();
        for w in all_lassos(ap.len(), 2, 3) {
            prop_assert_eq!(accepts_lasso(&a, &w), satisfies(&f, &w, &ap), "{} on {}", f, w.display(&ap));
        }
    }

    #[test]
    fn nnf_preserves_semantics(seed in any::<u64>()) {
        let f = formula(seed, 2);
        let (g, h) = (to_nnf(&f), negate_to_nnf(&f));
        prop_assert!(g.is_nnf() && h.is_nnf());
        let ap: Vec<String> = f.atoms().into_iter().collect();
        for w in all_lassos(ap.len(), 2, 2) {
            let v = satisfies(&f, &w, &ap);
            prop_assert_eq!(satisfies(&g, &w, &ap), v);
            prop_assert_eq!(satisfies(&h, &w, &ap), !v);
        }
    }

    #[test]
    fn display_reparses(seed in any::<u64>()) {
        let f = formula(seed, 3);
        prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn complement_and_rewrites_keep_languages(seed in any::<u64>(), atoms in 1usize..=2) {
        let f = formula(seed, atoms);
        let a = translate(&f, &Limits::default()).unwrap();
        // A few random automata have complements past any reasonable cap;
        // running out is an allowed answer, a wrong language is not.
        let c = complement(&a, &Limits::default().with_state_cap(20_000));
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        let (r, d) = (reduce(&a), degeneralize(&a));
        let h = from_hoa(&to_hoa(&a)).unwrap();
        let ap = a.ap().to_vec();
        for w in all_lassos(ap.len(), 2, 3) {
            let v = satisfies(&f, &w, &ap);
            prop_assert_eq!(accepts_lasso(&c, &w), !v, "complement of {} on {}", f, w.display(&ap));
            prop_assert_eq!(accepts_lasso(&r, &w), v);
            prop_assert_eq!(accepts_lasso(&d, &w), v);
            prop_assert_eq!(accepts_lasso(&h, &w), v);
        }
    }
}

#[test]
fn weak_until_unfolds() {
    let f = parse("p W q").unwrap();
    assert_eq!(f, parse("(p U q) || G p").unwrap());
}

#[test]
fn complement_stays_within_its_caps() {
    // Tableau automaton of a formula equivalent to `F q` whose rank-based
    // complement explodes: it must stop at the cap, not exhaust memory.
    let a = translate(&parse("G F !p U F q").unwrap(), &Limits::default()).unwrap();
    let r = complement(&a, &Limits::default().with_state_cap(5_000));
    assert!(matches!(r, Err(stutterkit::Error::Resource(_))));
}
