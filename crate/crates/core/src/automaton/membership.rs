use std::collections::HashMap;

use super::emptiness::tarjan;
use super::Tgba;
use crate::alphabet::{Marks, Valuation};
use crate::lasso::Lasso;

fn initial_set(a: &Tgba) -> Vec<bool> {
    let mut s = vec![false; a.num_states()];
    s[a.initial()] = true;
    s
}

fn step(a: &Tgba, from: &[bool], letter: Valuation) -> Vec<bool> {
    let mut to = vec![false; a.num_states()];
    for (q, _) in from.iter().enumerate().filter(|(_, &x)| x) {
        for e in a.out(q) {
            if e.guard.contains(letter) {
                to[e.dst] = true;
            }
        }
    }
    to
}

/// States from which `cycle^ω` has an accepting run.
fn accepting_from(a: &Tgba, cycle: &[Valuation]) -> Vec<bool> {
    let n = a.num_states();
    let m = cycle.len();
    let node = |q: usize, i: usize| q * m + i;
    let mut start = Vec::with_capacity(n * m + 1);
    let mut adj = Vec::new();
    let mut marks = Vec::new();
    start.push(0);
    for q in 0..n {
        for (i, &letter) in cycle.iter().enumerate() {
            for e in a.out(q) {
                if e.guard.contains(letter) {
                    adj.push(node(e.dst, (i + 1) % m));
                    marks.push(e.marks);
                }
            }
            start.push(adj.len());
        }
    }
    let scc = tarjan(&start, &adj, 0..n * m);
    let mut comp_marks = vec![Marks::NONE; scc.count];
    let mut cyclic = vec![false; scc.count];
    for v in 0..n * m {
        let c = scc.component[v];
        for j in start[v]..start[v + 1] {
            if scc.component[adj[j]] == c {
                cyclic[c] = true;
                comp_marks[c] = comp_marks[c].union(marks[j]);
            }
        }
    }
    let all = a.all_marks();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); scc.count];
    for v in 0..n * m {
        members[scc.component[v]].push(v);
    }
    let mut live = vec![false; scc.count];
    for c in 0..scc.count {
        live[c] = (cyclic[c] && comp_marks[c].is_superset(all))
            || members[c].iter().any(|&v| {
                (start[v]..start[v + 1]).any(|j| {
                    let d = scc.component[adj[j]];
                    d != c && live[d]
                })
            });
    }
    (0..n).map(|q| live[scc.component[node(q, 0)]]).collect()
}

/// Whether `stem · cycle^ω` is accepted. The valuations are read over
/// `a.ap()`.
pub fn accepts_lasso(a: &Tgba, w: &Lasso) -> bool {
    let mut reach = initial_set(a);
    for &letter in &w.stem {
        reach = step(a, &reach, letter);
    }
    let acc = accepting_from(a, &w.cycle);
    reach.iter().zip(&acc).any(|(x, y)| *x && *y)
}

/// Memoizes the states reached after each stem and the states accepting each
/// cycle, which makes repeated membership queries over a family of lassos
/// cheap.
pub struct MembershipCache<'a> {
    a: &'a Tgba,
    reach: HashMap<Vec<Valuation>, Vec<bool>>,
    acc: HashMap<Vec<Valuation>, Vec<bool>>,
}

impl<'a> MembershipCache<'a> {
    pub fn new(a: &'a Tgba) -> Self {
        let mut reach = HashMap::new();
        reach.insert(Vec::new(), initial_set(a));
        Self {
            a,
            reach,
            acc: HashMap::new(),
        }
    }

    fn ensure_reach(&mut self, stem: &[Valuation]) {
        if self.reach.contains_key(stem) {
            return;
        }
        let (last, prefix) = stem.split_last().expect("empty stem is cached");
        self.ensure_reach(prefix);
        let next = step(self.a, &self.reach[prefix], *last);
        self.reach.insert(stem.to_vec(), next);
    }

    pub fn accepts(&mut self, w: &Lasso) -> bool {
        self.ensure_reach(&w.stem);
        if !self.acc.contains_key(&w.cycle) {
            let acc = accepting_from(self.a, &w.cycle);
            self.acc.insert(w.cycle.clone(), acc);
        }
        let reach = &self.reach[&w.stem];
        let acc = &self.acc[&w.cycle];
        reach.iter().zip(acc).any(|(x, y)| *x && *y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::parse_lasso;
    use crate::limits::Limits;
    use crate::ltl::parse;
    use crate::translate::translate;

    fn check(formula: &str, word: &str) -> bool {
        let a = translate(&parse(formula).unwrap(), &Limits::default()).unwrap();
        let w = parse_lasso(word, a.ap()).unwrap();
        let direct = accepts_lasso(&a, &w);
        assert_eq!(MembershipCache::new(&a).accepts(&w), direct);
        direct
    }

    #[test]
    fn globally() {
        assert!(check("G p", ";{p}"));
        assert!(!check("G p", "{p};{}"));
    }

    #[test]
    fn eventually_twice() {
        assert!(check("F(p && X p)", "{p}{p};{}"));
        assert!(!check("F(p && X p)", "{p};{}"));
    }
}
