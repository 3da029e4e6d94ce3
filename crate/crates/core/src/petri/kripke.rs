use std::collections::{HashMap, VecDeque};

use super::{PetriNet, PropertyBinding};
use crate::alphabet::{LetterSet, Marks, Valuation, MAX_AP};
use crate::automaton::{Edge, Tgba};
use crate::error::{AutomatonError, Error, ResourceError};
use crate::limits::Limits;

/// Reachable markings in breadth-first order, state 0 being `m0`. Deadlocks
/// carry a self-loop, so every state has a successor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeGraph {
    pub ap: Vec<String>,
    pub markings: Vec<Vec<u32>>,
    pub succ: Vec<Vec<usize>>,
    pub labels: Vec<Valuation>,
}

impl KripkeGraph {
    pub fn num_states(&self) -> usize {
        self.markings.len()
    }

    pub fn num_edges(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Automaton whose runs read the label sequences of the paths from the
    /// initial marking. A fresh initial state reads the label of `m0`; every
    /// edge reads the label of its destination. No acceptance condition.
    pub fn to_tgba(&self) -> Tgba {
        let mut edges = vec![Edge {
            src: 0,
            dst: 1,
            guard: LetterSet::single(self.labels[0]),
            marks: Marks::NONE,
        }];
        for (s, succ) in self.succ.iter().enumerate() {
            for &d in succ {
                edges.push(Edge {
                    src: s + 1,
                    dst: d + 1,
                    guard: LetterSet::single(self.labels[d]),
                    marks: Marks::NONE,
                });
            }
        }
        Tgba::new(self.ap.clone(), self.num_states() + 1, 0, 0, edges).expect("valid Kripke view")
    }
}

/// Explores the markings reachable from `m0`, labelling each with the atoms
/// of `binding` in order.
pub fn build_kripke(net: &PetriNet, binding: &PropertyBinding, limits: &Limits) -> Result<KripkeGraph, Error> {
    if binding.atoms.len() > MAX_AP {
        return Err(AutomatonError::TooManyAps(binding.atoms.len()).into());
    }
    let preds = binding.compile(net)?;
    let label = |m: &[u32]| {
        preds
            .iter()
            .enumerate()
            .fold(Valuation::default(), |v, (i, c)| v.with(i, c.eval(m)))
    };
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut markings = vec![net.m0.clone()];
    let mut succ: Vec<Vec<usize>> = Vec::new();
    index.insert(net.m0.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        if s % 1024 == 0 {
            limits.check_time("state space")?;
        }
        let mut out = Vec::new();
        for t in 0..net.num_transitions() {
            if !net.is_enabled(&markings[s], t) {
                continue;
            }
            let m = net.fire(&markings[s], t).ok_or(ResourceError::StateCap {
                what: "state space (token count overflow)",
                cap: limits.state_cap,
            })?;
            let d = match index.get(&m) {
                Some(&d) => d,
                None => {
                    let d = markings.len();
                    limits.check_states(d + 1, "state space")?;
                    index.insert(m.clone(), d);
                    markings.push(m);
                    queue.push_back(d);
                    d
                }
            };
            if !out.contains(&d) {
                out.push(d);
            }
        }
        if out.is_empty() {
            out.push(s);
        }
        succ.push(out);
    }
    let labels = markings.iter().map(|m| label(m)).collect();
    Ok(KripkeGraph {
        ap: binding.names(),
        markings,
        succ,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::accepts_lasso;
    use crate::lasso::parse_lasso;
    use crate::petri::parse_net;

    fn kripke(text: &str) -> KripkeGraph {
        let (net, b) = parse_net(text).unwrap();
        build_kripke(&net, &b, &Limits::default()).unwrap()
    }

    #[test]
    fn dead_initial_marking_loops() {
        let k = kripke("place only init 1\natom p := m(only) = 1\n");
        assert_eq!(k.succ, vec![vec![0]]);
        let a = k.to_tgba();
        let ap = k.ap.clone();
        assert!(accepts_lasso(&a, &parse_lasso(";{p}", &ap).unwrap()));
        assert!(!accepts_lasso(&a, &parse_lasso(";{}", &ap).unwrap()));
    }

    #[test]
    fn token_cycle_is_strongly_connected() {
        let k = kripke("place a init 1\nplace b\ntrans t in a out b\ntrans u in b out a\n");
        assert_eq!(k.markings, vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(k.succ, vec![vec![1], vec![0]]);
    }

    #[test]
    fn state_cap_is_a_resource_error() {
        let (net, b) = parse_net("place a init 1\ntrans t in a out a:2\n").unwrap();
        let e = build_kripke(&net, &b, &Limits::default().with_state_cap(10)).unwrap_err();
        assert!(e.is_resource());
    }

    #[test]
    fn deterministic_order() {
        let text = "place a init 2\nplace b\nplace c\ntrans t in a out b\ntrans u in a out c\ntrans v in b,c out a\n";
        assert_eq!(kripke(text), kripke(text));
    }
}
