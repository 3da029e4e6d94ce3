//! Closure of languages under the shorter-than order, sensitivity
//! classification and the four-way length-sensitive partition.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::alphabet::{LetterSet, Marks, Valuation};
use crate::automaton::{complement, is_empty, product, Edge, Tgba};
use crate::error::Error;
use crate::limits::Limits;
use crate::ltl::{negate_to_nnf, Ltl};
use crate::translate::translate;

/// Automaton for the downward closure: every word shorter than an accepted
/// word.
///
/// For each letter `a`, a path `q1 -a-> q2 -a-> q3` gets a shortcut
/// `q1 -a-> q3` carrying the union of the marks of both edges, until no new
/// shortcut appears. Only shortcuts whose marks are not dominated by an
/// existing edge on the same letter are kept.
pub fn closure_cl(a: &Tgba) -> Tgba {
    let n = a.num_states();
    let letters = crate::alphabet::letter_count(a.ap().len());
    let mut edges: Vec<Edge> = a.edges().to_vec();
    for l in 0..letters {
        let letter = Valuation(l as u8);
        // per (src, dst): maximal mark sets reachable on `letter`
        let mut rel: BTreeMap<(usize, usize), Vec<Marks>> = BTreeMap::new();
        for e in a.edges().iter().filter(|e| e.guard.contains(letter)) {
            insert_maximal(rel.entry((e.src, e.dst)).or_default(), e.marks);
        }
        let original: Vec<(usize, usize, Marks)> = rel
            .iter()
            .flat_map(|(&(s, d), ms)| ms.iter().map(move |&m| (s, d, m)))
            .collect();
        let mut out_of: Vec<Vec<(usize, Marks)>> = vec![Vec::new(); n];
        for &(s, d, m) in &original {
            out_of[s].push((d, m));
        }
        let mut work = original.clone();
        while let Some((s, d, m)) = work.pop() {
            // extend s -> d with every edge leaving d
            let succ = out_of[d].clone();
            for (d2, m2) in succ {
                let mu = m.union(m2);
                if insert_maximal(rel.entry((s, d2)).or_default(), mu) {
                    out_of[s].push((d2, mu));
                    work.push((s, d2, mu));
                }
            }
            // and prefix it with every edge entering s
            let preds: Vec<(usize, Marks)> = (0..n)
                .flat_map(|p| {
                    out_of[p]
                        .iter()
                        .filter(|&&(x, _)| x == s)
                        .map(move |&(_, mp)| (p, mp))
                        .collect::<Vec<_>>()
                })
                .collect();
            for (p, mp) in preds {
                let mu = mp.union(m);
                if insert_maximal(rel.entry((p, d)).or_default(), mu) {
                    out_of[p].push((d, mu));
                    work.push((p, d, mu));
                }
            }
        }
        for ((s, d), ms) in rel {
            for m in ms {
                edges.push(Edge {
                    src: s,
                    dst: d,
                    guard: LetterSet::single(letter),
                    marks: m,
                });
            }
        }
    }
    Tgba::new(
        a.ap().to_vec(),
        n,
        a.initial(),
        a.acceptance_count(),
        edges,
    )
    .expect("closure keeps states and marks")
}

/// Adds `m` to an antichain of mark sets unless a superset is present.
fn insert_maximal(set: &mut Vec<Marks>, m: Marks) -> bool {
    if set.iter().any(|x| x.is_superset(m)) {
        return false;
    }
    set.retain(|x| !m.is_superset(*x));
    set.push(m);
    true
}

/// Automaton for the upward closure: every word longer than an accepted
/// word.
///
/// A state `q` entered on letter `a` gets a companion `(q, a)` with an
/// unmarked self-loop on `a` and the outgoing edges of `q`; every edge
/// entering `q` on `a` may enter the companion instead. States that already
/// loop on `a` need no companion. Staying forever on a companion's loop is
/// never accepting, so an infinite stutter is only accepted when the
/// original automaton accepts it.
pub fn selfloop_sl(a: &Tgba) -> Tgba {
    let a = a.with_explicit_acceptance();
    let n = a.num_states();
    let mut loops = vec![LetterSet::EMPTY; n];
    let mut entering = vec![LetterSet::EMPTY; n];
    for e in a.edges() {
        if e.src == e.dst {
            loops[e.src] = loops[e.src].union(e.guard);
        }
        entering[e.dst] = entering[e.dst].union(e.guard);
    }
    let mut memory: HashMap<(usize, Valuation), usize> = HashMap::new();
    let mut origin: Vec<usize> = (0..n).collect();
    for q in 0..n {
        for v in entering[q].iter() {
            if !loops[q].contains(v) {
                memory.insert((q, v), origin.len());
                origin.push(q);
            }
        }
    }
    let mut edges = Vec::new();
    for (s, &q) in origin.iter().enumerate() {
        if s >= n {
            let v = memory
                .iter()
                .find(|(_, &i)| i == s)
                .map(|(&(_, v), _)| v)
                .expect("memory state");
            edges.push(Edge {
                src: s,
                dst: s,
                guard: LetterSet::single(v),
                marks: Marks::NONE,
            });
        }
        for e in a.out(q) {
            edges.push(Edge { src: s, ..*e });
            for v in e.guard.iter() {
                if let Some(&m) = memory.get(&(e.dst, v)) {
                    edges.push(Edge {
                        src: s,
                        dst: m,
                        guard: LetterSet::single(v),
                        marks: e.marks,
                    });
                }
            }
        }
    }
    Tgba::new(
        a.ap().to_vec(),
        origin.len(),
        a.initial(),
        a.acceptance_count(),
        edges,
    )
    .expect("valid self-loopization")
}

/// How a language reacts to changing the length of stutter blocks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SensitivityClass {
    /// Stutter insensitive: both shortening and lengthening insensitive.
    SI,
    /// Lengthening insensitive only.
    LI,
    /// Shortening insensitive only.
    ShI,
    /// Length sensitive: neither.
    LS,
}

impl SensitivityClass {
    pub fn from_tests(shortening_insensitive: bool, lengthening_insensitive: bool) -> Self {
        match (shortening_insensitive, lengthening_insensitive) {
            (true, true) => Self::SI,
            (false, true) => Self::LI,
            (true, false) => Self::ShI,
            (false, false) => Self::LS,
        }
    }

    pub fn shortening_insensitive(self) -> bool {
        matches!(self, Self::SI | Self::ShI)
    }

    pub fn lengthening_insensitive(self) -> bool {
        matches!(self, Self::SI | Self::LI)
    }

    /// Class of the complement language: shortening and lengthening swap.
    pub fn dual(self) -> Self {
        Self::from_tests(self.lengthening_insensitive(), self.shortening_insensitive())
    }

    pub const ALL: [SensitivityClass; 4] = [Self::SI, Self::LI, Self::ShI, Self::LS];
}

impl fmt::Display for SensitivityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SI => "SI",
            Self::LI => "LI",
            Self::ShI => "ShI",
            Self::LS => "LS",
        })
    }
}

impl FromStr for SensitivityClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| format!("unknown sensitivity class `{s}`"))
    }
}

/// Classifies the language of `a` given an automaton `abar` of its
/// complement.
pub fn classify_automata(a: &Tgba, abar: &Tgba, limits: &Limits) -> Result<SensitivityClass, Error> {
    let shi = is_empty(&product(&closure_cl(a), abar, limits)?).0;
    limits.check_time("classification")?;
    let li = is_empty(&product(&selfloop_sl(a), abar, limits)?).0;
    Ok(SensitivityClass::from_tests(shi, li))
}

/// Classifies `f` using automata for `f` and for its syntactic negation.
pub fn classify_sensitivity(f: &Ltl, limits: &Limits) -> Result<SensitivityClass, Error> {
    let a = translate(f, limits)?;
    let abar = translate(&negate_to_nnf(f), limits)?;
    classify_automata(&a, &abar, limits)
}

/// The four parts of a language by how its words relate to comparable words
/// outside of it.
///
/// A word `w` of the language is in `si_pm` when every word comparable to it
/// is in the language, in `si_minus` when its shorter words are and some
/// longer word is not, in `si_plus` when its longer words are and some
/// shorter one is not, and in `ss` when both a shorter and a longer word
/// fall outside.
#[derive(Clone, Debug)]
pub struct LanguagePartition {
    pub si_pm: Tgba,
    pub si_minus: Tgba,
    pub si_plus: Tgba,
    pub ss: Tgba,
    /// `si_pm` holds `si_pm ∪ si_minus` and `si_minus` is empty.
    pub merged_minus: bool,
}

impl LanguagePartition {
    pub fn parts(&self) -> [(&'static str, &Tgba); 4] {
        [
            ("si_pm", &self.si_pm),
            ("si_minus", &self.si_minus),
            ("si_plus", &self.si_plus),
            ("ss", &self.ss),
        ]
    }
}

/// Partitions `L(l)` given `n` with `L(n)` its complement.
///
/// With `N = L(n)`: `si_pm = L \ (cl N ∪ sl N)`, `si_minus = (L ∩ cl N) \
/// sl N`, `si_plus = (L ∩ sl N) \ cl N` and `ss = L ∩ cl N ∩ sl N`. When
/// `L` is lengthening (shortening) insensitive, `cl N` (`sl N`) misses `L`
/// entirely and the corresponding complement is skipped.
pub fn partition_automata(
    l: &Tgba,
    n: &Tgba,
    merge_minus: bool,
    limits: &Limits,
) -> Result<LanguagePartition, Error> {
    let ap = crate::automaton::union_ap(l.ap(), n.ap());
    let l = l.extend_ap(&ap)?;
    let n = n.extend_ap(&ap)?;
    let cl_n = closure_cl(&n);
    let sl_n = selfloop_sl(&n);
    let empty = Tgba::empty(ap.clone());
    let cl_misses = is_empty(&product(&cl_n, &l, limits)?).0;
    let sl_misses = is_empty(&product(&sl_n, &l, limits)?).0;

    // words of L with no longer word outside, and with no shorter one outside
    let no_longer_out = if cl_misses { l.clone() } else { complement(&cl_n, limits)? };
    let no_shorter_out = if sl_misses { l.clone() } else { complement(&sl_n, limits)? };

    let si_plus = if sl_misses {
        empty.clone()
    } else {
        product(&no_longer_out, &sl_n, limits)?.trim()
    };
    let ss = if cl_misses || sl_misses {
        empty.clone()
    } else {
        product(&product(&l, &cl_n, limits)?, &sl_n, limits)?.trim()
    };
    let (si_pm, si_minus) = if merge_minus {
        (no_shorter_out.clone(), empty)
    } else {
        let minus = if cl_misses {
            empty
        } else {
            product(&no_shorter_out, &cl_n, limits)?.trim()
        };
        (product(&no_longer_out, &no_shorter_out, limits)?.trim(), minus)
    };
    Ok(LanguagePartition {
        si_pm,
        si_minus,
        si_plus,
        ss,
        merged_minus: merge_minus,
    })
}

/// Partitions the language of `f`; the complement automaton comes from the
/// syntactic negation of `f`.
pub fn partition_language(f: &Ltl, merge_minus: bool, limits: &Limits) -> Result<LanguagePartition, Error> {
    let l = translate(f, limits)?;
    let n = translate(&negate_to_nnf(f), limits)?;
    partition_automata(&l, &n, merge_minus, limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::accepts_lasso;
    use crate::lasso::{parse_lasso, Lasso};
    use crate::ltl::parse;

    fn l() -> Limits {
        Limits::default()
    }

    fn class(f: &str) -> SensitivityClass {
        classify_sensitivity(&parse(f).unwrap(), &l()).unwrap()
    }

    fn single_word(w: &Lasso, ap: &[String]) -> Tgba {
        let mut edges = Vec::new();
        let len = w.stem.len() + w.cycle.len();
        for i in 0..len {
            let dst = if i + 1 == len { w.stem.len() } else { i + 1 };
            edges.push(Edge {
                src: i,
                dst,
                guard: LetterSet::single(w.at(i)),
                marks: Marks::NONE,
            });
        }
        Tgba::new(ap.to_vec(), len, 0, 0, edges).unwrap()
    }

    #[test]
    fn cl_shortens_a_stem() {
        let ap = vec!["p".to_string()];
        let w = parse_lasso("{p}{p};{}", &ap).unwrap();
        let a = closure_cl(&single_word(&w, &ap));
        assert!(accepts_lasso(&a, &parse_lasso("{p};{}", &ap).unwrap()));
        assert!(!accepts_lasso(&a, &parse_lasso("{p}{p}{p};{}", &ap).unwrap()));
    }

    #[test]
    fn sl_lengthens_a_stem() {
        let ap = vec!["p".to_string()];
        let w = parse_lasso("{p};{}", &ap).unwrap();
        let a = selfloop_sl(&single_word(&w, &ap));
        assert!(accepts_lasso(&a, &parse_lasso("{p}{p};{}", &ap).unwrap()));
        assert!(!accepts_lasso(&a, &parse_lasso(";{p}", &ap).unwrap()));
        assert!(!accepts_lasso(&a, &parse_lasso(";{}", &ap).unwrap()));
    }

    #[test]
    fn classes() {
        assert_eq!(class("G p"), SensitivityClass::SI);
        assert_eq!(class("G(p -> X !p)"), SensitivityClass::ShI);
        assert_eq!(class("F(p && X p)"), SensitivityClass::LI);
        assert_eq!(class("X p"), SensitivityClass::LS);
        assert_eq!(class("true"), SensitivityClass::SI);
        assert_eq!(class("false"), SensitivityClass::SI);
    }

    #[test]
    fn class_names_round_trip() {
        for c in SensitivityClass::ALL {
            assert_eq!(c.to_string().parse::<SensitivityClass>().unwrap(), c);
        }
    }

    #[test]
    fn partition_of_stutter_insensitive() {
        let f = parse("G p").unwrap();
        let p = partition_language(&f, false, &l()).unwrap();
        assert!(is_empty(&p.si_minus).0 && is_empty(&p.si_plus).0 && is_empty(&p.ss).0);
        assert!(!is_empty(&p.si_pm).0);
    }

    #[test]
    fn partition_of_twice_p() {
        let f = parse("F(p && X p)").unwrap();
        let p = partition_language(&f, false, &l()).unwrap();
        let ap = p.si_pm.ap().to_vec();
        assert!(is_empty(&p.ss).0);
        assert!(is_empty(&p.si_minus).0);
        assert!(accepts_lasso(&p.si_pm, &parse_lasso("{};{p}", &ap).unwrap()));
        assert!(accepts_lasso(&p.si_plus, &parse_lasso("{p}{p};{}", &ap).unwrap()));
    }
}
