//! Ultimately periodic ω-words.
//!
//! A [`Lasso`] is `stem · cycle^ω` over valuations. A cycle made of a single
//! repeated symbol encodes an ω-word, a word ending in an infinite stutter.

mod blocks;
mod oracle;

use std::fmt;

use crate::alphabet::{letter_count, Valuation};
use crate::error::ParseError;

pub use blocks::{
    canonical_shortest, longer_words, shorter_than, shorter_words, stutter_equivalent, BlockForm,
};
pub use oracle::{bounded_sensitivity_oracle, SensitivityReport};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    pub stem: Vec<Valuation>,
    pub cycle: Vec<Valuation>,
}

impl Lasso {
    /// Builds a lasso as given; see [`Lasso::normalized`] for the canonical
    /// form.
    ///
    /// # Panics
    ///
    /// Panics when `cycle` is empty.
    pub fn new(stem: Vec<Valuation>, cycle: Vec<Valuation>) -> Self {
        assert!(!cycle.is_empty(), "a lasso needs a nonempty cycle");
        Self { stem, cycle }
    }

    /// The unique representative of the same ω-word whose cycle is primitive
    /// and whose stem is as short as possible.
    pub fn normalized(&self) -> Lasso {
        let mut stem = self.stem.clone();
        let mut cycle = primitive_root(&self.cycle).to_vec();
        while let Some(&last) = stem.last() {
            if last != *cycle.last().expect("nonempty") {
                break;
            }
            stem.pop();
            cycle.rotate_right(1);
        }
        Lasso { stem, cycle }
    }

    pub fn is_normalized(&self) -> bool {
        primitive_root(&self.cycle).len() == self.cycle.len() && self.stem.last() != self.cycle.last()
    }

    /// True for words ending in an infinite stutter on one symbol.
    pub fn is_omega(&self) -> bool {
        self.cycle.iter().all(|&v| v == self.cycle[0])
    }

    /// Symbol at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> Valuation {
        if i < self.stem.len() {
            self.stem[i]
        } else {
            self.cycle[(i - self.stem.len()) % self.cycle.len()]
        }
    }

    /// Renders in the literal syntax, e.g. `{p}{p};{}`.
    pub fn display<'a>(&'a self, ap: &'a [String]) -> impl fmt::Display + 'a {
        DisplayLasso { w: self, ap }
    }
}

/// Shortest word `u` with `cycle = u^k`.
fn primitive_root(cycle: &[Valuation]) -> &[Valuation] {
    let n = cycle.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| cycle[i] == cycle[i - p]))
        .map(|p| &cycle[..p])
        .unwrap_or(cycle)
}

struct DisplayLasso<'a> {
    w: &'a Lasso,
    ap: &'a [String],
}

impl fmt::Display for DisplayLasso<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.w.stem {
            write!(f, "{}", v.display(self.ap))?;
        }
        f.write_str(";")?;
        for v in &self.w.cycle {
            write!(f, "{}", v.display(self.ap))?;
        }
        Ok(())
    }
}

/// Parses the literal syntax `stem ; cycle` where each valuation is a braced
/// set of true atoms drawn from `ap`: `{p}{p};{}` is `{p}{p}({})^ω`.
pub fn parse_lasso(text: &str, ap: &[String]) -> Result<Lasso, ParseError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut stem = Vec::new();
    let mut cycle = Vec::new();
    let mut in_cycle = false;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i == bytes.len() {
            break;
        }
        match bytes[i] {
            b';' if !in_cycle => {
                in_cycle = true;
                i += 1;
            }
            b'{' => {
                i += 1;
                let mut v = Valuation::default();
                loop {
                    skip_ws(&mut i);
                    if i < bytes.len() && bytes[i] == b'}' {
                        i += 1;
                        break;
                    }
                    let start = i;
                    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                        i += 1;
                    }
                    if start == i {
                        return Err(ParseError::new(start, "expected an atom name or `}`"));
                    }
                    let name = &text[start..i];
                    let pos = ap
                        .iter()
                        .position(|n| n == name)
                        .ok_or_else(|| ParseError::new(start, format!("unknown atom `{name}`")))?;
                    v = v.with(pos, true);
                    skip_ws(&mut i);
                    if i < bytes.len() && bytes[i] == b',' {
                        i += 1;
                    }
                }
                if in_cycle {
                    cycle.push(v);
                } else {
                    stem.push(v);
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::new(i, format!("unexpected `{ch}`")));
            }
        }
    }
    if !in_cycle {
        return Err(ParseError::new(text.len(), "missing `;` before the cycle"));
    }
    if cycle.is_empty() {
        return Err(ParseError::new(text.len(), "the cycle must be nonempty"));
    }
    Ok(Lasso { stem, cycle })
}

/// Every normalized lasso over `n_ap` propositions with stem length at most
/// `stem_max` and cycle length between 1 and `cycle_max`, each ω-word once.
pub fn enumerate_lassos(n_ap: usize, stem_max: usize, cycle_max: usize) -> Vec<Lasso> {
    let mut out = Vec::new();
    for_each_lasso(n_ap, stem_max, cycle_max, |w| out.push(w.clone()));
    out
}

pub(crate) fn for_each_lasso(
    n_ap: usize,
    stem_max: usize,
    cycle_max: usize,
    mut f: impl FnMut(&Lasso),
) {
    let letters = letter_count(n_ap);
    let words = |len: usize| -> Vec<Vec<Valuation>> {
        let mut all = vec![Vec::new()];
        for _ in 0..len {
            all = all
                .into_iter()
                .flat_map(|w| {
                    (0..letters).map(move |l| {
                        let mut w = w.clone();
                        w.push(Valuation(l as u8));
                        w
                    })
                })
                .collect();
        }
        all
    };
    let cycles: Vec<Vec<Valuation>> = (1..=cycle_max)
        .flat_map(words)
        .filter(|c| primitive_root(c).len() == c.len())
        .collect();
    for stem_len in 0..=stem_max {
        for stem in words(stem_len) {
            for cycle in &cycles {
                if stem.last() == cycle.last() {
                    continue;
                }
                f(&Lasso {
                    stem: stem.clone(),
                    cycle: cycle.clone(),
                });
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Valuation = Valuation(0);
    const B: Valuation = Valuation(1);

    #[test]
    fn omega_collapse() {
        let w = Lasso::new(vec![A], vec![B, B]).normalized();
        assert_eq!(w, Lasso::new(vec![A], vec![B]));
        assert!(w.is_omega());
    }

    #[test]
    fn stem_absorption() {
        let w = Lasso::new(vec![A, B], vec![A, B]).normalized();
        assert_eq!(w, Lasso::new(vec![], vec![A, B]));
    }

    #[test]
    fn primitivity() {
        let w = Lasso::new(vec![], vec![A, B, A, B]).normalized();
        assert_eq!(w, Lasso::new(vec![], vec![A, B]));
    }

    #[test]
    fn rotation_through_stem() {
        // b (a b)^ω = (b a)^ω
        let w = Lasso::new(vec![B], vec![A, B]).normalized();
        assert_eq!(w, Lasso::new(vec![], vec![B, A]));
    }

    #[test]
    fn literal_round_trip() {
        let ap = vec!["p".to_string(), "q".to_string()];
        let w = parse_lasso("{p}{p, q} ; {}", &ap).unwrap();
        assert_eq!(w, Lasso::new(vec![Valuation(1), Valuation(3)], vec![Valuation(0)]));
        assert_eq!(w.display(&ap).to_string(), "{p}{p,q};{}");
        assert_eq!(parse_lasso(&w.display(&ap).to_string(), &ap).unwrap(), w);
    }

    #[test]
    fn literal_errors() {
        let ap = vec!["p".to_string()];
        assert_eq!(parse_lasso("{p}", &ap).unwrap_err().offset, 3);
        assert_eq!(parse_lasso("{p};", &ap).unwrap_err().offset, 4);
        assert_eq!(parse_lasso("{zz};{}", &ap).unwrap_err().offset, 1);
        assert_eq!(parse_lasso("x;{}", &ap).unwrap_err().offset, 0);
    }

    #[test]
    fn enumeration_is_normalized_and_unique() {
        let all = enumerate_lassos(1, 2, 2);
        let mut seen = std::collections::HashSet::new();
        for w in &all {
            assert!(w.is_normalized());
            assert!(seen.insert(w.clone()));
        }
        // empty stem takes all 4 cycles {a,b,ab,ba}; the 3 stems ending in
        // each letter take the 2 cycles ending in the other one
        assert_eq!(all.len(), 4 + 3 * 2 + 3 * 2);
    }
}
