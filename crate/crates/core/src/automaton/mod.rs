//! Transition-based generalized Büchi automata.
//!
//! Guards are explicit [`LetterSet`]s over the automaton's ordered list of
//! atomic propositions; acceptance marks live on edges. A run is accepting
//! when every mark `0..k` occurs infinitely often on it. With `k = 0` every
//! infinite run is accepting.

mod complement;
mod degen;
mod emptiness;
pub mod hoa;
mod membership;
mod product;
mod reduce;

use std::collections::{BTreeMap, VecDeque};

use crate::alphabet::{lift, projection, LetterSet, Marks, MAX_AP};
use crate::error::AutomatonError;

pub use complement::{complement, difference};
pub use degen::degeneralize;
pub use emptiness::{check_emptiness, is_empty, Scc};
pub use membership::{accepts_lasso, MembershipCache};
pub use product::product;
pub(crate) use product::union_ap;
pub use reduce::reduce;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub guard: LetterSet,
    pub marks: Marks,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tgba {
    ap: Vec<String>,
    states: usize,
    initial: usize,
    k: u32,
    edges: Vec<Edge>,
    first: Vec<usize>,
}

impl Tgba {
    /// Builds an automaton, dropping edges with empty guards and merging
    /// parallel edges that carry the same marks.
    pub fn new(
        ap: Vec<String>,
        states: usize,
        initial: usize,
        k: u32,
        edges: Vec<Edge>,
    ) -> Result<Self, AutomatonError> {
        if ap.len() > MAX_AP {
            return Err(AutomatonError::TooManyAps(ap.len()));
        }
        if k > 32 {
            return Err(AutomatonError::TooManyMarks(k as usize));
        }
        let states = states.max(1);
        if initial >= states {
            return Err(AutomatonError::BadState {
                src: initial,
                dst: initial,
                states,
            });
        }
        let full = LetterSet::full(ap.len());
        let allowed = Marks::all(k);
        let mut merged: BTreeMap<(usize, usize, Marks), LetterSet> = BTreeMap::new();
        for e in edges {
            if e.src >= states || e.dst >= states {
                return Err(AutomatonError::BadState {
                    src: e.src,
                    dst: e.dst,
                    states,
                });
            }
            if !allowed.is_superset(e.marks) {
                let mark = Marks(e.marks.0 & !allowed.0).iter().next().unwrap_or(0);
                return Err(AutomatonError::BadMark { mark, count: k });
            }
            let guard = e.guard.intersect(full);
            if guard.is_empty() {
                continue;
            }
            let slot = merged.entry((e.src, e.dst, e.marks)).or_default();
            *slot = slot.union(guard);
        }
        let edges: Vec<Edge> = merged
            .into_iter()
            .map(|((src, dst, marks), guard)| Edge {
                src,
                dst,
                guard,
                marks,
            })
            .collect();
        let mut first = vec![0; states + 1];
        for e in &edges {
            first[e.src + 1] += 1;
        }
        for s in 0..states {
            first[s + 1] += first[s];
        }
        Ok(Self {
            ap,
            states,
            initial,
            k,
            edges,
            first,
        })
    }

    /// One state, no edges.
    pub fn empty(ap: Vec<String>) -> Self {
        Self::new(ap, 1, 0, 0, vec![]).expect("trivial automaton")
    }

    /// One state with a `true` self-loop and no acceptance condition.
    pub fn universal(ap: Vec<String>) -> Self {
        let guard = LetterSet::full(ap.len());
        Self::new(
            ap,
            1,
            0,
            0,
            vec![Edge {
                src: 0,
                dst: 0,
                guard,
                marks: Marks::NONE,
            }],
        )
        .expect("trivial automaton")
    }

    pub fn ap(&self) -> &[String] {
        &self.ap
    }

    pub fn num_states(&self) -> usize {
        self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn acceptance_count(&self) -> u32 {
        self.k
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out(&self, s: usize) -> &[Edge] {
        &self.edges[self.first[s]..self.first[s + 1]]
    }

    pub fn all_marks(&self) -> Marks {
        Marks::all(self.k)
    }

    pub fn is_deterministic(&self) -> bool {
        (0..self.states).all(|s| {
            let mut seen = LetterSet::EMPTY;
            self.out(s).iter().all(|e| {
                let clash = !seen.intersect(e.guard).is_empty();
                seen = seen.union(e.guard);
                !clash
            })
        })
    }

    /// Re-expresses the automaton over `ap`, which must contain every
    /// proposition of `self.ap()`. Extra propositions are unconstrained.
    pub fn extend_ap(&self, ap: &[String]) -> Result<Tgba, AutomatonError> {
        if ap == self.ap.as_slice() {
            return Ok(self.clone());
        }
        if ap.len() > MAX_AP {
            return Err(AutomatonError::TooManyAps(ap.len()));
        }
        let positions: Vec<usize> = self
            .ap
            .iter()
            .map(|name| {
                ap.iter()
                    .position(|n| n == name)
                    .ok_or_else(|| AutomatonError::TooManyAps(ap.len() + 1))
            })
            .collect::<Result<_, _>>()?;
        let proj = projection(&positions, ap.len());
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                guard: lift(e.guard, &proj),
                ..*e
            })
            .collect();
        Tgba::new(ap.to_vec(), self.states, self.initial, self.k, edges)
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(s) = queue.pop_front() {
            for e in self.out(s) {
                if !seen[e.dst] {
                    seen[e.dst] = true;
                    queue.push_back(e.dst);
                }
            }
        }
        seen
    }

    /// Keeps only states that are reachable and from which some accepting
    /// run starts. The initial state is always kept.
    pub fn trim(&self) -> Tgba {
        let live = emptiness::live_states(self);
        let mut keep = live;
        keep[self.initial] = true;
        self.restrict(&keep)
    }

    /// Sub-automaton induced by the kept states, renumbered in BFS order
    /// from the initial state.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Tgba {
        let mut index = vec![usize::MAX; self.states];
        let mut order = vec![self.initial];
        index[self.initial] = 0;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for e in self.out(s) {
                if keep[e.dst] && index[e.dst] == usize::MAX {
                    index[e.dst] = order.len();
                    order.push(e.dst);
                }
            }
        }
        let edges = order
            .iter()
            .flat_map(|&s| self.out(s))
            .filter(|e| index[e.dst] != usize::MAX)
            .map(|e| Edge {
                src: index[e.src],
                dst: index[e.dst],
                ..*e
            })
            .collect();
        Tgba::new(self.ap.clone(), order.len(), 0, self.k, edges).expect("restriction is valid")
    }

    /// Same automaton with `k = 1` and every edge marked when `k = 0`.
    pub(crate) fn with_explicit_acceptance(&self) -> Tgba {
        if self.k > 0 {
            return self.clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                marks: Marks::single(0),
                ..*e
            })
            .collect();
        Tgba::new(self.ap.clone(), self.states, self.initial, 1, edges).expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parallel_edges_merge_and_empty_guards_vanish() {
        let p = LetterSet::literal(1, 0, true);
        let np = LetterSet::literal(1, 0, false);
        let a = Tgba::new(
            ap(&["p"]),
            2,
            0,
            1,
            vec![
                Edge { src: 0, dst: 1, guard: p, marks: Marks::NONE },
                Edge { src: 0, dst: 1, guard: np, marks: Marks::NONE },
                Edge { src: 1, dst: 1, guard: LetterSet::EMPTY, marks: Marks::single(0) },
            ],
        )
        .unwrap();
        assert_eq!(a.edges().len(), 1);
        assert_eq!(a.out(0)[0].guard, LetterSet::full(1));
        assert!(a.out(1).is_empty());
    }

    #[test]
    fn validation() {
        let e = Edge { src: 0, dst: 3, guard: LetterSet::full(0), marks: Marks::NONE };
        assert!(matches!(
            Tgba::new(vec![], 2, 0, 0, vec![e]),
            Err(AutomatonError::BadState { .. })
        ));
        let e = Edge { src: 0, dst: 0, guard: LetterSet::full(0), marks: Marks::single(1) };
        assert!(matches!(
            Tgba::new(vec![], 1, 0, 1, vec![e]),
            Err(AutomatonError::BadMark { mark: 1, .. })
        ));
        assert!(Tgba::new(ap(&["a", "b", "c", "d", "e", "f", "g"]), 1, 0, 0, vec![]).is_err());
    }

    #[test]
    fn extend_ap_keeps_language_shape() {
        let p = LetterSet::literal(1, 0, true);
        let a = Tgba::new(
            ap(&["p"]),
            1,
            0,
            0,
            vec![Edge { src: 0, dst: 0, guard: p, marks: Marks::NONE }],
        )
        .unwrap();
        let b = a.extend_ap(&ap(&["q", "p"])).unwrap();
        assert_eq!(b.out(0)[0].guard, LetterSet::literal(2, 1, true));
    }
}
