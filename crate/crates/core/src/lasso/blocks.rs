use super::Lasso;
use crate::alphabet::{LetterSet, Marks, Valuation};
use crate::automaton::{Edge, Tgba};

/// Run-length view of a normalized lasso: `a0^n0 a1^n1 ...` with adjacent
/// symbols distinct, including across the stem/loop seam and around the
/// loop. An ω-word has no loop blocks and a final stuttered symbol instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockForm {
    pub stem_blocks: Vec<(Valuation, u32)>,
    pub loop_blocks: Vec<(Valuation, u32)>,
    pub omega: Option<Valuation>,
}

fn runs(word: &[Valuation]) -> Vec<(Valuation, u32)> {
    let mut out: Vec<(Valuation, u32)> = Vec::new();
    for &v in word {
        match out.last_mut() {
            Some((s, n)) if *s == v => *n += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

impl BlockForm {
    pub fn of(w: &Lasso) -> BlockForm {
        let w = w.normalized();
        if w.is_omega() {
            return BlockForm {
                stem_blocks: runs(&w.stem),
                loop_blocks: Vec::new(),
                omega: Some(w.cycle[0]),
            };
        }
        let c = &w.cycle;
        let n = c.len();
        let seam_ok = w.stem.last() != Some(&c[0]) && c[n - 1] != c[0];
        let j = if seam_ok {
            0
        } else {
            (1..n).find(|&j| c[j - 1] != c[j]).expect("a primitive cycle of length > 1 changes symbol")
        };
        let mut stem = w.stem.clone();
        stem.extend_from_slice(&c[..j]);
        let mut cycle = c.clone();
        cycle.rotate_left(j);
        BlockForm {
            stem_blocks: runs(&stem),
            loop_blocks: runs(&cycle),
            omega: None,
        }
    }

    /// Block `i` of the infinite block sequence of a plain word.
    fn block(&self, i: usize) -> (Valuation, u32) {
        if i < self.stem_blocks.len() {
            self.stem_blocks[i]
        } else {
            let l = &self.loop_blocks;
            l[(i - self.stem_blocks.len()) % l.len()]
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `w1 ⪯ w2`: same block symbols with every exponent of `w1` at most the
/// corresponding one of `w2`. ω-words only compare with ω-words ending in the
/// same symbol.
pub fn shorter_than(w1: &Lasso, w2: &Lasso) -> bool {
    blocks_shorter(&BlockForm::of(w1), &BlockForm::of(w2))
}

pub(crate) fn blocks_shorter(b1: &BlockForm, b2: &BlockForm) -> bool {
    match (b1.omega, b2.omega) {
        (Some(x), Some(y)) => {
            x == y
                && b1.stem_blocks.len() == b2.stem_blocks.len()
                && b1
                    .stem_blocks
                    .iter()
                    .zip(&b2.stem_blocks)
                    .all(|(&(s1, n1), &(s2, n2))| s1 == s2 && n1 <= n2)
        }
        (None, None) => {
            let (l1, l2) = (b1.loop_blocks.len(), b2.loop_blocks.len());
            let span = b1.stem_blocks.len().max(b2.stem_blocks.len()) + l1 / gcd(l1, l2) * l2;
            (0..span).all(|i| {
                let (s1, n1) = b1.block(i);
                let (s2, n2) = b2.block(i);
                s1 == s2 && n1 <= n2
            })
        }
        _ => false,
    }
}

/// Shortest word of the stutter class of `w`: every exponent set to 1.
pub fn canonical_shortest(w: &Lasso) -> Lasso {
    let b = BlockForm::of(w);
    let stem: Vec<Valuation> = b.stem_blocks.iter().map(|&(s, _)| s).collect();
    let cycle: Vec<Valuation> = match b.omega {
        Some(s) => vec![s],
        None => b.loop_blocks.iter().map(|&(s, _)| s).collect(),
    };
    Lasso { stem, cycle }.normalized()
}

/// `w1 ∼ w2`: both words share their shortest representative.
pub fn stutter_equivalent(w1: &Lasso, w2: &Lasso) -> bool {
    canonical_shortest(w1) == canonical_shortest(w2)
}

fn chain_edge(src: usize, dst: usize, v: Valuation, marked: bool) -> Edge {
    Edge {
        src,
        dst,
        guard: LetterSet::single(v),
        marks: if marked { Marks::single(0) } else { Marks::NONE },
    }
}

/// Lays out one state per unit of exponent for every block. `open` lets a
/// block grow beyond its exponent through a self-loop on its last state;
/// otherwise the block can be cut short after any unit. Returns the edges
/// and, per block, the states after which the next block may start.
fn block_chain(
    blocks: &[(Valuation, u32)],
    open: bool,
    mut next_state: usize,
    edges: &mut Vec<Edge>,
) -> (Vec<(usize, Vec<usize>)>, usize) {
    // (first state, exits) per block
    let mut layout = Vec::new();
    for &(v, n) in blocks {
        let first = next_state;
        next_state += n as usize;
        for c in 0..n as usize - 1 {
            edges.push(chain_edge(first + c, first + c + 1, v, false));
        }
        let last = first + n as usize - 1;
        if open {
            edges.push(chain_edge(last, last, v, false));
            layout.push((first, vec![last]));
        } else {
            layout.push((first, (first..=last).collect()));
        }
    }
    (layout, next_state)
}

fn closure_automaton(w: &Lasso, ap: &[String], open: bool) -> Tgba {
    let b = BlockForm::of(w);
    let mut edges = Vec::new();
    let init = 0;
    let (stem, next) = block_chain(&b.stem_blocks, open, 1, &mut edges);
    // entering block `i` from the previous exits, or from the initial state
    let link = |edges: &mut Vec<Edge>, from: &[usize], to: usize, v: Valuation, marked| {
        for &s in from {
            edges.push(chain_edge(s, to, v, marked));
        }
    };
    for i in 1..stem.len() {
        let exits = stem[i - 1].1.clone();
        link(&mut edges, &exits, stem[i].0, b.stem_blocks[i].0, false);
    }
    let tail_exits = stem.last().map(|(_, e)| e.clone()).unwrap_or_else(|| vec![init]);
    if let Some(&(first, _)) = stem.first() {
        edges.push(chain_edge(init, first, b.stem_blocks[0].0, false));
    }
    let (states, k) = match b.omega {
        Some(v) => {
            let omega = next;
            link(&mut edges, &tail_exits, omega, v, false);
            edges.push(chain_edge(omega, omega, v, true));
            (next + 1, 1)
        }
        None => {
            let (lp, end) = block_chain(&b.loop_blocks, open, next, &mut edges);
            link(&mut edges, &tail_exits, lp[0].0, b.loop_blocks[0].0, false);
            for i in 1..lp.len() {
                let exits = lp[i - 1].1.clone();
                link(&mut edges, &exits, lp[i].0, b.loop_blocks[i].0, false);
            }
            let exits = lp.last().expect("loop blocks").1.clone();
            link(&mut edges, &exits, lp[0].0, b.loop_blocks[0].0, true);
            (end, 1)
        }
    };
    let full_ap = ap.to_vec();
    Tgba::new(full_ap, states, init, k, edges).expect("valid closure automaton")
}

/// Automaton for `{ w' | w ⪯ w' }` over `ap`.
pub fn longer_words(w: &Lasso, ap: &[String]) -> Tgba {
    closure_automaton(w, ap, true)
}

/// Automaton for `{ w' | w' ⪯ w }` over `ap`.
pub fn shorter_words(w: &Lasso, ap: &[String]) -> Tgba {
    closure_automaton(w, ap, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::accepts_lasso;
    use crate::lasso::enumerate_lassos;

    const A: Valuation = Valuation(0);
    const B: Valuation = Valuation(1);
    const C: Valuation = Valuation(2);

    fn l(stem: &[Valuation], cycle: &[Valuation]) -> Lasso {
        Lasso::new(stem.to_vec(), cycle.to_vec())
    }

    #[test]
    fn block_form_seams() {
        // a (a b)^ω: the seam a|a needs unrolling
        let b = BlockForm::of(&l(&[A], &[A, B]));
        assert_eq!(b.stem_blocks, vec![(A, 2)]);
        assert_eq!(b.loop_blocks, vec![(B, 1), (A, 1)]);
        // (a a b)^ω wraps around b|a fine at rotation 0
        let b = BlockForm::of(&l(&[], &[A, A, B]));
        assert_eq!(b.loop_blocks, vec![(A, 2), (B, 1)]);
        let b = BlockForm::of(&l(&[A, A], &[B]));
        assert_eq!((b.stem_blocks, b.omega), (vec![(A, 2)], Some(B)));
    }

    #[test]
    fn paper_order_examples() {
        // σ = (c a)^ω
        let sigma = [C, A];
        let ab = l(&[A, B], &sigma);
        let aab = l(&[A, A, B], &sigma);
        let abb = l(&[A, B, B], &sigma);
        assert!(shorter_than(&ab, &aab));
        assert!(shorter_than(&ab, &abb));
        assert!(!shorter_than(&aab, &abb));
        assert!(!shorter_than(&abb, &aab));
        assert!(stutter_equivalent(&aab, &abb));
        assert!(shorter_than(&ab, &ab));
    }

    #[test]
    fn omega_words_are_apart() {
        let plain = l(&[A], &[B, A]);
        let omega = l(&[A], &[B]);
        assert!(!shorter_than(&plain, &omega));
        assert!(!shorter_than(&omega, &plain));
        assert!(!stutter_equivalent(&l(&[A], &[B]), &l(&[B], &[A])));
    }

    #[test]
    fn loop_lengths_align_by_lcm() {
        // (a b)^ω ⪯ (a b a a b b)^ω
        assert!(shorter_than(&l(&[], &[A, B]), &l(&[], &[A, B, A, A, B, B])));
        assert!(!shorter_than(&l(&[], &[A, B, A, A, B, B]), &l(&[], &[A, B])));
    }

    #[test]
    fn closure_automata_agree_with_order() {
        let ap = vec!["p".to_string()];
        let all = enumerate_lassos(1, 3, 3);
        for w in &all {
            let up = longer_words(w, &ap);
            let down = shorter_words(w, &ap);
            for v in &all {
                assert_eq!(accepts_lasso(&up, v), shorter_than(w, v), "{w:?} ⪯ {v:?}");
                assert_eq!(accepts_lasso(&down, v), shorter_than(v, w), "{v:?} ⪯ {w:?}");
            }
        }
    }
}
