use std::collections::{BTreeMap, HashMap};

use super::{Edge, Tgba};
use crate::alphabet::{LetterSet, Marks};

/// Trims the automaton and merges bisimilar states: states that, letter by
/// letter, move with the same marks into the same classes. The language is
/// unchanged.
pub fn reduce(a: &Tgba) -> Tgba {
    let a = a.trim();
    let n = a.num_states();
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, Marks, LetterSet)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for s in 0..n {
            let mut sig: BTreeMap<(usize, Marks), LetterSet> = BTreeMap::new();
            for e in a.out(s) {
                let g = sig.entry((block[e.dst], e.marks)).or_default();
                *g = g.union(e.guard);
            }
            let sig = sig.into_iter().map(|((b, m), g)| (b, m, g)).collect();
            let fresh = ids.len();
            next[s] = *ids.entry((block[s], sig)).or_insert(fresh);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    if count == n {
        return a;
    }
    let edges = a
        .edges()
        .iter()
        .map(|e| Edge {
            src: block[e.src],
            dst: block[e.dst],
            ..*e
        })
        .collect();
    let q = Tgba::new(
        a.ap().to_vec(),
        count,
        block[a.initial()],
        a.acceptance_count(),
        edges,
    )
    .expect("quotient is valid");
    q.restrict(&vec![true; count])
}
