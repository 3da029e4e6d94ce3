//! Büchi complementation.
//!
//! The input is reduced and degeneralized first. Deterministic automata use
//! the two-copy construction, weak automata the breakpoint construction, and
//! everything else the rank-based construction restricted to tight level
//! rankings.

use std::collections::HashMap;

use super::emptiness::tarjan;
use super::{degeneralize, product, reduce, Edge, Tgba};
use crate::alphabet::{letter_count, LetterSet, Marks, Valuation};
use crate::error::{Error, ResourceError};
use crate::limits::Limits;

/// Automaton accepting exactly the words `a` rejects.
pub fn complement(a: &Tgba, limits: &Limits) -> Result<Tgba, Error> {
    let b = reduce(&degeneralize(&reduce(a)));
    let out = if b.is_deterministic() {
        deterministic(&b)
    } else if let Some(good) = weak_good_states(&b) {
        breakpoint(&b, &good, limits)?
    } else {
        ranked(&b, limits)?
    };
    Ok(reduce(&out))
}

/// Words accepted by `a` and rejected by `b`.
pub fn difference(a: &Tgba, b: &Tgba, limits: &Limits) -> Result<Tgba, Error> {
    let nb = complement(b, limits)?;
    product(a, &nb, limits)
}

/// Ranked states can have hundreds of successors per letter, so the edge
/// list dominates memory; it gets a budget proportional to the state cap.
const EDGES_PER_STATE: usize = 16;

/// Interns states given as byte keys and records edges over single letters.
struct Builder {
    index: HashMap<Vec<u8>, usize>,
    keys: Vec<Vec<u8>>,
    edges: Vec<Edge>,
    limits: Limits,
}

impl Builder {
    fn new(limits: &Limits) -> Self {
        Self {
            index: HashMap::new(),
            keys: Vec::new(),
            edges: Vec::new(),
            limits: *limits,
        }
    }

    fn intern(&mut self, key: Vec<u8>) -> Result<usize, ResourceError> {
        if let Some(&i) = self.index.get(&key) {
            return Ok(i);
        }
        let i = self.keys.len();
        self.limits.check_states(i + 1, "complement")?;
        if i.is_multiple_of(1024) {
            self.limits.check_time("complement")?;
        }
        self.index.insert(key.clone(), i);
        self.keys.push(key);
        Ok(i)
    }

    fn edge(&mut self, src: usize, letter: Valuation, dst: usize, marked: bool) -> Result<(), ResourceError> {
        let count = self.edges.len() + 1;
        if count.is_multiple_of(EDGES_PER_STATE * 1024) {
            self.limits.check_time("complement")?;
            self.limits.check_states(count / EDGES_PER_STATE, "complement edges")?;
        }
        self.edges.push(Edge {
            src,
            dst,
            guard: LetterSet::single(letter),
            marks: if marked { Marks::single(0) } else { Marks::NONE },
        });
        Ok(())
    }

    fn finish(self, ap: &[String]) -> Tgba {
        Tgba::new(ap.to_vec(), self.keys.len(), 0, 1, self.edges).expect("valid complement")
    }
}

/// Complement of a deterministic automaton with one mark: guess the point
/// after which no marked edge is taken again.
fn deterministic(a: &Tgba) -> Tgba {
    let n = a.num_states();
    let sink = n;
    let full = LetterSet::full(a.ap().len());
    // copy 1: states 0..=n, copy 2: n+1..=2n+1
    let second = |q: usize| n + 1 + q;
    let mut edges = Vec::new();
    let mut push = |src, dst, guard, marked: bool| {
        edges.push(Edge {
            src,
            dst,
            guard,
            marks: if marked { Marks::single(0) } else { Marks::NONE },
        })
    };
    for q in 0..n {
        let mut covered = LetterSet::EMPTY;
        for e in a.out(q) {
            covered = covered.union(e.guard);
            push(q, e.dst, e.guard, false);
            if !e.marks.contains(0) {
                push(q, second(e.dst), e.guard, false);
                push(second(q), second(e.dst), e.guard, true);
            }
        }
        let missing = covered.complement(a.ap().len());
        push(q, sink, missing, false);
        push(q, second(sink), missing, false);
        push(second(q), second(sink), missing, true);
    }
    push(sink, sink, full, false);
    push(sink, second(sink), full, false);
    push(second(sink), second(sink), full, true);
    Tgba::new(a.ap().to_vec(), 2 * n + 2, a.initial(), 1, edges).expect("valid")
}

/// For a weak automaton (every component has all or none of its internal
/// edges marked), the states of accepting components.
fn weak_good_states(a: &Tgba) -> Option<Vec<bool>> {
    let n = a.num_states();
    let mut start = vec![0];
    for s in 0..n {
        start.push(start[s] + a.out(s).len());
    }
    let adj: Vec<usize> = a.edges().iter().map(|e| e.dst).collect();
    let scc = tarjan(&start, &adj, 0..n);
    let mut marked = vec![false; scc.count];
    let mut unmarked = vec![false; scc.count];
    for e in a.edges() {
        let c = scc.component[e.src];
        if c == scc.component[e.dst] {
            if e.marks.contains(0) {
                marked[c] = true;
            } else {
                unmarked[c] = true;
            }
        }
    }
    if (0..scc.count).any(|c| marked[c] && unmarked[c]) {
        return None;
    }
    Some((0..n).map(|s| marked[scc.component[s]]).collect())
}

fn successors(a: &Tgba, letters: usize) -> Vec<Vec<usize>> {
    let mut succ = vec![Vec::new(); a.num_states() * letters];
    for e in a.edges() {
        for v in e.guard.iter() {
            succ[e.src * letters + v.0 as usize].push(e.dst);
        }
    }
    succ
}

/// Breakpoint construction: deterministic, accepting when the set of runs
/// confined to accepting components since the last breakpoint empties
/// infinitely often.
fn breakpoint(a: &Tgba, good: &[bool], limits: &Limits) -> Result<Tgba, Error> {
    const OUT: u8 = 0;
    const IN_S: u8 = 1;
    const IN_O: u8 = 2;
    let n = a.num_states();
    let letters = letter_count(a.ap().len());
    let succ = successors(a, letters);
    let mut b = Builder::new(limits);
    let mut init = vec![OUT; n];
    init[a.initial()] = IN_S;
    b.intern(init)?;
    let mut head = 0;
    while head < b.keys.len() {
        let key = b.keys[head].clone();
        let src = head;
        head += 1;
        let o_empty = !key.contains(&IN_O);
        for l in 0..letters {
            let mut next = vec![OUT; n];
            for q in 0..n {
                if key[q] == OUT {
                    continue;
                }
                for &d in &succ[q * letters + l] {
                    let tracked = good[d] && (o_empty || key[q] == IN_O);
                    let v = if tracked { IN_O } else { IN_S };
                    next[d] = next[d].max(v);
                }
            }
            let dst = b.intern(next)?;
            b.edge(src, Valuation(l as u8), dst, o_empty)?;
        }
    }
    Ok(b.finish(a.ap()))
}

/// Successors of a one-mark automaton per state and letter, with whether the
/// edge is marked. An automaton without marks accepts every run, so all of
/// its edges count as marked.
struct Succ {
    n: usize,
    letters: usize,
    succ: Vec<Vec<(usize, bool)>>,
}

impl Succ {
    fn of(a: &Tgba) -> Succ {
        let n = a.num_states();
        let letters = letter_count(a.ap().len());
        let all = a.acceptance_count() == 0;
        let mut succ = vec![Vec::new(); n * letters];
        for e in a.edges() {
            for v in e.guard.iter() {
                succ[e.src * letters + v.0 as usize].push((e.dst, all || e.marks.contains(0)));
            }
        }
        Succ { n, letters, succ }
    }
}

const NONE: u8 = u8::MAX;
const IN_O: u8 = 0x80;
const SUBSET: u8 = 0;
const RANKED: u8 = 1;
const SINK: u8 = 2;

/// Calls `visit` on every tight level ranking with rank at most `bound[i]`
/// at position `i`: the largest rank `r` is odd and every odd rank below it
/// is used. Stops at the first error.
fn tight_rankings<E>(bound: &[u8], visit: &mut impl FnMut(&[u8]) -> Result<(), E>) -> Result<(), E> {
    let max_bound = bound.iter().copied().max().unwrap_or(0);
    let mut ranks = vec![0u8; bound.len()];
    let mut r = 1u8;
    while r <= max_bound && (r as usize).div_ceil(2) <= bound.len() {
        let mut odd_seen = vec![0u32; r as usize + 1];
        enumerate(0, r, bound, &mut ranks, &mut odd_seen, visit)?;
        r += 2;
    }
    Ok(())
}

fn enumerate<E>(
    i: usize,
    r: u8,
    bound: &[u8],
    ranks: &mut Vec<u8>,
    odd_seen: &mut Vec<u32>,
    visit: &mut impl FnMut(&[u8]) -> Result<(), E>,
) -> Result<(), E> {
    let missing = (1..=r).step_by(2).filter(|&o| odd_seen[o as usize] == 0).count();
    if missing > bound.len() - i {
        return Ok(());
    }
    if i == bound.len() {
        return visit(ranks);
    }
    for v in 0..=bound[i].min(r) {
        ranks[i] = v;
        odd_seen[v as usize] += 1;
        enumerate(i + 1, r, bound, ranks, odd_seen, visit)?;
        odd_seen[v as usize] -= 1;
    }
    Ok(())
}

/// Rank-based complementation with a subset phase followed by a phase of
/// tight level rankings `(S, O, f)`; accepting when `O` is empty. Ranks live
/// on states and acceptance stays on edges: a marked edge leaving an odd
/// rank must lower it.
fn ranked(a: &Tgba, limits: &Limits) -> Result<Tgba, Error> {
    let sx = Succ::of(a);
    let n = sx.n;
    let needed = (2 * n).saturating_sub(1);
    let cap = limits.rank_cap.unwrap_or(2 * n);
    if cap < needed || needed > 126 {
        return Err(ResourceError::RankCap { bound: cap, states: n }.into());
    }
    let cap = cap.min(126) as u8;
    let letters = sx.letters;
    let mut b = Builder::new(limits);
    let mut init = vec![SUBSET];
    init.extend((0..n).map(|q| (q == a.initial()) as u8));
    b.intern(init)?;
    let mut head = 0;
    while head < b.keys.len() {
        let key = b.keys[head].clone();
        let src = head;
        head += 1;
        let body = &key[1..];
        if key[0] == SINK {
            for l in 0..letters {
                b.edge(src, Valuation(l as u8), src, true)?;
            }
            continue;
        }
        let in_s = |q: usize| match key[0] {
            SUBSET => body[q] == 1,
            _ => body[q] != NONE,
        };
        let o_empty = key[0] == SUBSET || !body.iter().any(|&x| x != NONE && x & IN_O != 0);
        for l in 0..letters {
            let letter = Valuation(l as u8);
            let mut bound = vec![NONE; n];
            let mut from_o = vec![false; n];
            for q in (0..n).filter(|&q| in_s(q)) {
                let fq = if key[0] == SUBSET { cap } else { body[q] & !IN_O };
                let qo = key[0] == RANKED && body[q] & IN_O != 0;
                for &(d, marked) in &sx.succ[q * letters + l] {
                    let fd = if marked && fq % 2 == 1 { fq - 1 } else { fq };
                    bound[d] = if bound[d] == NONE { fd } else { bound[d].min(fd) };
                    from_o[d] |= qo;
                }
            }
            let support: Vec<usize> = (0..n).filter(|&d| bound[d] != NONE).collect();
            if support.is_empty() {
                let dst = b.intern(vec![SINK])?;
                b.edge(src, letter, dst, key[0] == RANKED && o_empty)?;
                continue;
            }
            if key[0] == SUBSET {
                let mut next = vec![SUBSET];
                next.extend((0..n).map(|d| (bound[d] != NONE) as u8));
                let dst = b.intern(next)?;
                b.edge(src, letter, dst, false)?;
            }
            let bounds: Vec<u8> = support.iter().map(|&d| bound[d]).collect();
            let accepting = key[0] == RANKED && o_empty;
            tight_rankings(&bounds, &mut |f: &[u8]| {
                let mut next = vec![RANKED];
                next.extend(std::iter::repeat_n(NONE, n));
                for (j, &d) in support.iter().enumerate() {
                    let even = f[j] % 2 == 0;
                    // the first ranked state starts with an empty O
                    let tracked = key[0] == RANKED && even && (o_empty || from_o[d]);
                    next[1 + d] = f[j] | if tracked { IN_O } else { 0 };
                }
                let dst = b.intern(next)?;
                b.edge(src, letter, dst, accepting)
            })?;
        }
    }
    Ok(b.finish(a.ap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::is_empty;
    use crate::ltl::parse;
    use crate::translate::translate;

    #[test]
    fn complement_of_universal_is_empty() {
        let u = Tgba::universal(vec!["p".into()]);
        assert!(is_empty(&complement(&u, &Limits::default()).unwrap()).0);
    }

    #[test]
    fn complement_of_empty_is_universal() {
        let e = Tgba::empty(vec!["p".into()]);
        let c = complement(&e, &Limits::default()).unwrap();
        let u = Tgba::universal(vec!["p".into()]);
        assert!(is_empty(&difference(&u, &c, &Limits::default()).unwrap()).0);
    }

    #[test]
    fn tight_rankings_cover_odd_ranks() {
        let mut out = Vec::new();
        tight_rankings::<()>(&[3, 3], &mut |f| {
            out.push(f.to_vec());
            Ok(())
        })
        .unwrap();
        // rank 1: every assignment from {0,1}^2 with a 1; rank 3: {1,3} in some order
        assert_eq!(out.len(), 3 + 2);
    }

    #[test]
    fn rank_cap_too_small() {
        let l = Limits::default();
        let a = translate(&parse("F G p").unwrap(), &l).unwrap();
        let r = complement(&a, &Limits::default().with_rank_cap(0));
        // F G p is weak, so the rank bound is never consulted
        assert!(r.is_ok());
        let g = translate(&parse("G F p && G F q").unwrap(), &l).unwrap();
        if weak_good_states(&degeneralize(&g)).is_none() && !g.is_deterministic() {
            assert!(matches!(
                complement(&g, &Limits::default().with_rank_cap(0)),
                Err(Error::Resource(ResourceError::RankCap { .. }))
            ));
        }
    }
}
