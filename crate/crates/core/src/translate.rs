//! Tableau translation of LTL into a TGBA.
//!
//! A state is a set of obligations in negation normal form. Expanding a state
//! rewrites its obligations into a letter constraint and a set of
//! obligations for the next step, branching on disjunctions and on the two
//! ways to satisfy `U`, `F` and `R`. Each `U` or `F` subformula owns one
//! acceptance mark; an edge carries every mark except those of eventualities
//! it postponed.

use std::collections::{BTreeMap, HashMap};

use crate::alphabet::{LetterSet, Marks};
use crate::automaton::{Edge, Tgba};
use crate::error::{AutomatonError, Error};
use crate::limits::Limits;
use crate::ltl::{to_nnf, Ltl};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    Until(u32, u32),
    Release(u32, u32),
    Eventually(u32),
    Globally(u32),
}

struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
    mark: Vec<Option<u32>>,
    marks: u32,
}

impl Arena {
    fn intern(&mut self, n: Node) -> u32 {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(n);
        self.index.insert(n, i);
        let owns_mark = matches!(n, Node::Until(..) | Node::Eventually(_));
        self.mark.push(owns_mark.then(|| {
            self.marks += 1;
            self.marks - 1
        }));
        i
    }

    fn build(&mut self, f: &Ltl, ap: &[String]) -> u32 {
        let n = match f {
            Ltl::True => Node::True,
            Ltl::False => Node::False,
            Ltl::Atom(name) => Node::Lit(position(ap, name), true),
            Ltl::Not(a) => match &**a {
                Ltl::Atom(name) => Node::Lit(position(ap, name), false),
                _ => unreachable!("input is in negation normal form"),
            },
            Ltl::And(a, b) => Node::And(self.build(a, ap), self.build(b, ap)),
            Ltl::Or(a, b) => Node::Or(self.build(a, ap), self.build(b, ap)),
            Ltl::Implies(..) => unreachable!("input is in negation normal form"),
            Ltl::Next(a) => Node::Next(self.build(a, ap)),
            Ltl::Until(a, b) => Node::Until(self.build(a, ap), self.build(b, ap)),
            Ltl::Release(a, b) => Node::Release(self.build(a, ap), self.build(b, ap)),
            Ltl::Eventually(a) => Node::Eventually(self.build(a, ap)),
            Ltl::Globally(a) => Node::Globally(self.build(a, ap)),
        };
        self.intern(n)
    }
}

fn position(ap: &[String], name: &str) -> usize {
    ap.iter().position(|n| n == name).expect("atom is in the alphabet")
}

#[derive(Clone)]
struct Work {
    todo: Vec<u32>,
    seen: Vec<u32>,
    letters: LetterSet,
    next: Vec<u32>,
    postponed: Marks,
}

/// All ways of meeting `obligations` in one step: letter constraint,
/// obligations left for the next step, marks postponed.
fn expand(arena: &Arena, obligations: &[u32], n_ap: usize) -> Vec<(LetterSet, Vec<u32>, Marks)> {
    let mut out: BTreeMap<(Vec<u32>, Marks), LetterSet> = BTreeMap::new();
    let mut stack = vec![Work {
        todo: obligations.to_vec(),
        seen: Vec::new(),
        letters: LetterSet::full(n_ap),
        next: Vec::new(),
        postponed: Marks::NONE,
    }];
    'branch: while let Some(mut w) = stack.pop() {
        while let Some(f) = w.todo.pop() {
            if w.seen.contains(&f) {
                continue;
            }
            w.seen.push(f);
            match arena.nodes[f as usize] {
                Node::True => {}
                Node::False => continue 'branch,
                Node::Lit(i, positive) => {
                    w.letters = w.letters.intersect(LetterSet::literal(n_ap, i, positive));
                    if w.letters.is_empty() {
                        continue 'branch;
                    }
                }
                Node::And(a, b) => w.todo.extend([a, b]),
                Node::Or(a, b) => {
                    let mut other = w.clone();
                    other.todo.push(b);
                    stack.push(other);
                    w.todo.push(a);
                }
                Node::Next(a) => w.next.push(a),
                Node::Until(a, b) => {
                    let mut later = w.clone();
                    later.todo.push(a);
                    later.next.push(f);
                    later.postponed = later.postponed.union(Marks::single(arena.mark[f as usize].unwrap()));
                    stack.push(later);
                    w.todo.push(b);
                }
                Node::Eventually(a) => {
                    let mut later = w.clone();
                    later.next.push(f);
                    later.postponed = later.postponed.union(Marks::single(arena.mark[f as usize].unwrap()));
                    stack.push(later);
                    w.todo.push(a);
                }
                Node::Release(a, b) => {
                    let mut later = w.clone();
                    later.todo.push(b);
                    later.next.push(f);
                    stack.push(later);
                    w.todo.extend([a, b]);
                }
                Node::Globally(a) => {
                    w.todo.push(a);
                    w.next.push(f);
                }
            }
        }
        w.next.sort_unstable();
        w.next.dedup();
        let slot = out.entry((w.next, w.postponed)).or_default();
        *slot = slot.union(w.letters);
    }
    let branches: Vec<(LetterSet, Vec<u32>, Marks)> =
        out.into_iter().map(|((next, m), l)| (l, next, m)).collect();
    // a branch is redundant when another one allows more letters, leaves
    // fewer obligations and postpones fewer eventualities
    let dominates = |j: usize, i: usize| {
        let (li, ni, pi) = &branches[i];
        let (lj, nj, pj) = &branches[j];
        li.intersect(*lj) == *li && nj.iter().all(|x| ni.contains(x)) && pi.is_superset(*pj)
    };
    let subsumed = |i: usize| {
        (0..branches.len()).any(|j| j != i && dominates(j, i) && (j < i || !dominates(i, j)))
    };
    (0..branches.len())
        .filter(|&i| !subsumed(i))
        .map(|i| branches[i].clone())
        .collect()
}

/// Builds a TGBA accepting exactly the models of `f`. The alphabet is
/// `f.atoms()` in sorted order.
pub fn translate(f: &Ltl, limits: &Limits) -> Result<Tgba, Error> {
    let ap: Vec<String> = f.atoms().into_iter().collect();
    if ap.len() > crate::alphabet::MAX_AP {
        return Err(AutomatonError::TooManyAps(ap.len()).into());
    }
    let nnf = to_nnf(f);
    let mut arena = Arena {
        nodes: Vec::new(),
        index: HashMap::new(),
        mark: Vec::new(),
        marks: 0,
    };
    let root = arena.build(&nnf, &ap);
    if arena.marks > 32 {
        return Err(AutomatonError::TooManyMarks(arena.marks as usize).into());
    }
    let k = arena.marks;
    let all = Marks::all(k);

    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut states = vec![vec![root]];
    index.insert(states[0].clone(), 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let obligations = states[head].clone();
        let src = head;
        head += 1;
        limits.check_time("translation")?;
        for (letters, next, postponed) in expand(&arena, &obligations, ap.len()) {
            let dst = match index.get(&next) {
                Some(&d) => d,
                None => {
                    let d = states.len();
                    limits.check_states(d + 1, "translation")?;
                    index.insert(next.clone(), d);
                    states.push(next);
                    d
                }
            };
            edges.push(Edge {
                src,
                dst,
                guard: letters,
                marks: Marks(all.0 & !postponed.0),
            });
        }
    }
    Ok(Tgba::new(ap, states.len(), 0, k, edges)?.trim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{accepts_lasso, is_empty};
    use crate::lasso::parse_lasso;
    use crate::ltl::parse;

    fn tr(f: &str) -> Tgba {
        translate(&parse(f).unwrap(), &Limits::default()).unwrap()
    }

    #[test]
    fn false_is_empty() {
        assert!(is_empty(&tr("false")).0);
        assert!(is_empty(&tr("p && !p")).0);
    }

    #[test]
    fn globally() {
        let a = tr("G p");
        assert!(accepts_lasso(&a, &parse_lasso(";{p}", a.ap()).unwrap()));
        assert!(!accepts_lasso(&a, &parse_lasso("{p}{};{p}", a.ap()).unwrap()));
        assert!(!accepts_lasso(&a, &parse_lasso(";{p}{}", a.ap()).unwrap()));
        let (empty, w) = is_empty(&a);
        assert!(!empty);
        let w = w.unwrap();
        assert!(w.stem.iter().chain(&w.cycle).all(|v| v.get(0)));
    }

    #[test]
    fn eventually_needs_a_mark() {
        let a = tr("F p");
        assert_eq!(a.acceptance_count(), 1);
        assert!(!accepts_lasso(&a, &parse_lasso(";{}", a.ap()).unwrap()));
        assert!(accepts_lasso(&a, &parse_lasso("{}{};{p}{}", a.ap()).unwrap()));
    }

    #[test]
    fn witness_of_p_then_not_p() {
        let a = tr("p && X !p");
        let (empty, w) = is_empty(&a);
        assert!(!empty);
        let w = w.unwrap();
        assert!(accepts_lasso(&a, &w));
        let letters: Vec<bool> = w.stem.iter().chain(w.cycle.iter().cycle()).take(2).map(|v| v.get(0)).collect();
        assert_eq!(letters, vec![true, false]);
    }

    #[test]
    fn alphabet_is_sorted_atoms() {
        assert_eq!(tr("q U p").ap(), ["p".to_string(), "q".to_string()]);
        assert!(tr("true").ap().is_empty());
    }
}
