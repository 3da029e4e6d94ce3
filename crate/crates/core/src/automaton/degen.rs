use std::collections::HashMap;

use super::{Edge, Tgba};
use crate::alphabet::Marks;

/// Equivalent automaton with a single acceptance mark.
///
/// States are pairs of an original state and a level counting how many
/// marks, in order, have been seen since the last accepting edge. Automata
/// with `k <= 1` come back unchanged apart from `k = 0` becoming `k = 1`
/// with every edge marked.
pub fn degeneralize(a: &Tgba) -> Tgba {
    let k = a.acceptance_count();
    if k <= 1 {
        return a.with_explicit_acceptance();
    }
    let advance = |mut level: u32, marks: Marks| {
        while level < k && marks.contains(level) {
            level += 1;
        }
        level
    };
    let mut index: HashMap<(usize, u32), usize> = HashMap::new();
    let mut states = vec![(a.initial(), 0u32)];
    index.insert(states[0], 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let (q, level) = states[head];
        let src = head;
        head += 1;
        for e in a.out(q) {
            let reached = advance(level, e.marks);
            let (next, marks) = if reached == k {
                (0, Marks::single(0))
            } else {
                (reached, Marks::NONE)
            };
            let key = (e.dst, next);
            let dst = *index.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            edges.push(Edge {
                src,
                dst,
                guard: e.guard,
                marks,
            });
        }
    }
    Tgba::new(a.ap().to_vec(), states.len(), 0, 1, edges).expect("valid degeneralization")
}
