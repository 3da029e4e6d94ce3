//! Letters over a small set of atomic propositions.
//!
//! A [`Valuation`] assigns a truth value to each proposition of an ordered
//! list; bit `i` is the value of proposition `i`. With at most [`MAX_AP`]
//! propositions the alphabet has at most 64 letters, so a set of letters
//! fits in one `u64` ([`LetterSet`]).

use std::fmt;

pub const MAX_AP: usize = 6;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Valuation(pub u8);

impl Valuation {
    pub fn get(self, ap: usize) -> bool {
        self.0 >> ap & 1 == 1
    }

    pub fn with(self, ap: usize, value: bool) -> Self {
        if value {
            Valuation(self.0 | 1 << ap)
        } else {
            Valuation(self.0 & !(1 << ap))
        }
    }

    /// Renders as a braced set of true atoms, e.g. `{p,q}`.
    pub fn display<'a>(self, ap: &'a [String]) -> impl fmt::Display + 'a {
        DisplayValuation { v: self, ap }
    }
}

struct DisplayValuation<'a> {
    v: Valuation,
    ap: &'a [String],
}

impl fmt::Display for DisplayValuation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for (i, name) in self.ap.iter().enumerate() {
            if self.v.get(i) {
                if !first {
                    f.write_str(",")?;
                }
                f.write_str(name)?;
                first = false;
            }
        }
        f.write_str("}")
    }
}

/// Number of letters over `n` propositions.
pub fn letter_count(n: usize) -> usize {
    1 << n
}

/// Set of letters, bit `v` set iff valuation `v` is a member.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LetterSet(pub u64);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    pub fn full(n_ap: usize) -> Self {
        debug_assert!(n_ap <= MAX_AP);
        if n_ap == MAX_AP {
            LetterSet(u64::MAX)
        } else {
            LetterSet((1u64 << (1 << n_ap)) - 1)
        }
    }

    pub fn single(v: Valuation) -> Self {
        LetterSet(1 << v.0)
    }

    /// Letters where proposition `ap` has the given polarity.
    pub fn literal(n_ap: usize, ap: usize, positive: bool) -> Self {
        let mut bits = 0u64;
        for v in 0..letter_count(n_ap) {
            if (v >> ap & 1 == 1) == positive {
                bits |= 1 << v;
            }
        }
        LetterSet(bits)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: Valuation) -> bool {
        self.0 >> v.0 & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        LetterSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        LetterSet(self.0 & other.0)
    }

    pub fn complement(self, n_ap: usize) -> Self {
        LetterSet(!self.0 & Self::full(n_ap).0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<Valuation> {
        (self.0 != 0).then(|| Valuation(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> impl Iterator<Item = Valuation> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Valuation(v as u8))
        })
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|v| v.0)).finish()
    }
}

/// Acceptance marks carried by an edge, bit `i` for mark `i`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Marks(pub u32);

impl Marks {
    pub const NONE: Marks = Marks(0);

    pub fn all(count: u32) -> Self {
        if count >= 32 {
            Marks(u32::MAX)
        } else {
            Marks((1u32 << count) - 1)
        }
    }

    pub fn single(mark: u32) -> Self {
        Marks(1 << mark)
    }

    pub fn contains(self, mark: u32) -> bool {
        self.0 >> mark & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        Marks(self.0 | other.0)
    }

    pub fn is_superset(self, other: Self) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let m = bits.trailing_zeros();
            bits &= bits - 1;
            Some(m)
        })
    }
}

impl fmt::Debug for Marks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Maps letters of a union alphabet back onto a component alphabet.
///
/// `positions[i]` is the index, in the union alphabet, of proposition `i` of
/// the component.
pub(crate) fn projection(positions: &[usize], union_ap: usize) -> Vec<Valuation> {
    (0..letter_count(union_ap))
        .map(|v| {
            let mut out = 0u8;
            for (i, &pos) in positions.iter().enumerate() {
                if v >> pos & 1 == 1 {
                    out |= 1 << i;
                }
            }
            Valuation(out)
        })
        .collect()
}

/// Lifts a component letter set into the union alphabet.
pub(crate) fn lift(set: LetterSet, proj: &[Valuation]) -> LetterSet {
    let mut bits = 0u64;
    for (v, p) in proj.iter().enumerate() {
        if set.contains(*p) {
            bits |= 1 << v;
        }
    }
    LetterSet(bits)
}
