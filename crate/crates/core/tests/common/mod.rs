//! Reference implementations the library is checked against. Nothing here
//! goes through automata construction.

#![allow(dead_code)]

use std::collections::BTreeSet;

use stutterkit::alphabet::Valuation;
use stutterkit::automaton::{is_empty, product};
use stutterkit::lasso::{longer_words, shorter_words, Lasso};
use stutterkit::ltl::Ltl;
use stutterkit::petri::{KripkeGraph, PetriNet};
use stutterkit::Limits;

/// Truth of `f` at every position of the lasso, positions past the stem
/// wrapping onto the cycle.
fn eval_all(f: &Ltl, w: &Lasso, ap: &[String]) -> Vec<bool> {
    let n = w.stem.len() + w.cycle.len();
    let next = |i: usize| if i + 1 < n { i + 1 } else { w.stem.len() };
    let sym = |i: usize| if i < w.stem.len() { w.stem[i] } else { w.cycle[i - w.stem.len()] };
    // least (until) or greatest (release) fixpoint of v(i) = now(i) || (keep(i) && v(next i))
    let fix = |now: Vec<bool>, keep: Vec<bool>, init: bool| {
        let mut v = vec![init; n];
        for _ in 0..=n {
            for i in (0..n).rev() {
                v[i] = now[i] || (keep[i] && v[next(i)]);
            }
        }
        v
    };
    match f {
        Ltl::True => vec![true; n],
        Ltl::False => vec![false; n],
        Ltl::Atom(a) => {
            let k = ap.iter().position(|x| x == a).expect("atom in ap");
            (0..n).map(|i| sym(i).get(k)).collect()
        }
        Ltl::Not(a) => eval_all(a, w, ap).into_iter().map(|x| !x).collect(),
        Ltl::And(a, b) => zip(eval_all(a, w, ap), eval_all(b, w, ap), |x, y| x && y),
        Ltl::Or(a, b) => zip(eval_all(a, w, ap), eval_all(b, w, ap), |x, y| x || y),
        Ltl::Implies(a, b) => zip(eval_all(a, w, ap), eval_all(b, w, ap), |x, y| !x || y),
        Ltl::Next(a) => {
            let v = eval_all(a, w, ap);
            (0..n).map(|i| v[next(i)]).collect()
        }
        Ltl::Until(a, b) => fix(eval_all(b, w, ap), eval_all(a, w, ap), false),
        Ltl::Eventually(a) => fix(eval_all(a, w, ap), vec![true; n], false),
        Ltl::Release(a, b) => {
            // a R b == !(!a U !b)
            let na = eval_all(a, w, ap).into_iter().map(|x| !x).collect();
            let nb = eval_all(b, w, ap).into_iter().map(|x| !x).collect();
            fix(nb, na, false).into_iter().map(|x| !x).collect()
        }
        Ltl::Globally(a) => {
            let na = eval_all(a, w, ap).into_iter().map(|x| !x).collect();
            fix(na, vec![true; n], false).into_iter().map(|x| !x).collect()
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, f: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

/// Whether the word satisfies `f`.
pub fn satisfies(f: &Ltl, w: &Lasso, ap: &[String]) -> bool {
    eval_all(f, w, ap)[0]
}

/// Every lasso `stem · cycle^ω` over `n_ap` atoms with the given bounds,
/// normalized and deduplicated.
pub fn all_lassos(n_ap: usize, stem_max: usize, loop_max: usize) -> BTreeSet<Lasso> {
    let letters: Vec<Valuation> = (0..1u8 << n_ap).map(Valuation).collect();
    let mut words: Vec<Vec<Vec<Valuation>>> = vec![vec![vec![]]];
    for len in 1..=stem_max.max(loop_max) {
        let prev = &words[len - 1];
        let next = prev
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
        words.push(next);
    }
    let mut out = BTreeSet::new();
    for s in 0..=stem_max {
        for c in 1..=loop_max {
            for stem in &words[s] {
                for cycle in &words[c] {
                    out.insert(Lasso::new(stem.clone(), cycle.clone()).normalized());
                }
            }
        }
    }
    out
}

/// Label words of the paths of `k` that close into a lasso with at most
/// `stem_max` stem states and `loop_max` loop states, normalized.
pub fn kripke_lassos(k: &KripkeGraph, stem_max: usize, loop_max: usize) -> BTreeSet<Lasso> {
    let mut out = BTreeSet::new();
    let mut path = vec![0usize];
    fn walk(k: &KripkeGraph, path: &mut Vec<usize>, s_max: usize, l_max: usize, out: &mut BTreeSet<Lasso>) {
        let last = *path.last().expect("nonempty path");
        for &d in &k.succ[last] {
            for (j, &s) in path.iter().enumerate() {
                if s == d && j <= s_max && path.len() - j <= l_max {
                    let labels: Vec<Valuation> = path.iter().map(|&x| k.labels[x]).collect();
                    out.insert(Lasso::new(labels[..j].to_vec(), labels[j..].to_vec()).normalized());
                }
            }
            if path.len() < s_max + l_max {
                path.push(d);
                walk(k, path, s_max, l_max, out);
                path.pop();
            }
        }
    }
    walk(k, &mut path, stem_max, loop_max, &mut out);
    out
}

/// Some word of `k`'s language is at least as long as `w` (`up`) or at most
/// as long (`!up`) in the stutter order. Exact: the closure automata are
/// intersected with the whole state space.
pub fn kripke_has_comparable(k: &KripkeGraph, w: &Lasso, up: bool) -> bool {
    let closure = if up { longer_words(w, &k.ap) } else { shorter_words(w, &k.ap) };
    let prod = product(&closure, &k.to_tgba(), &Limits::default()).expect("small product");
    !is_empty(&prod).0
}

/// Reduction property at bound: (a) each bounded lasso of the reduced
/// space has a longer run in the original one, (b) each bounded lasso of
/// the original has a shorter run in the reduced one. Returns the
/// offending words.
pub fn reduction_violations(
    original: &KripkeGraph,
    reduced: &KripkeGraph,
    stem_max: usize,
    loop_max: usize,
) -> (Vec<Lasso>, Vec<Lasso>) {
    let a = kripke_lassos(reduced, stem_max, loop_max)
        .into_iter()
        .filter(|w| !kripke_has_comparable(original, w, true))
        .collect();
    let b = kripke_lassos(original, stem_max, loop_max)
        .into_iter()
        .filter(|w| !kripke_has_comparable(reduced, w, false))
        .collect();
    (a, b)
}

/// Markings reachable from `m0`, by plain breadth-first search.
pub fn reachable_markings(net: &PetriNet, cap: usize) -> Option<Vec<Vec<u32>>> {
    let mut seen = vec![net.m0.clone()];
    let mut i = 0;
    while i < seen.len() {
        for t in 0..net.num_transitions() {
            if let Some(m) = net.fire(&seen[i], t) {
                if !seen.contains(&m) {
                    if seen.len() == cap {
                        return None;
                    }
                    seen.push(m);
                }
            }
        }
        i += 1;
    }
    Some(seen)
}
