//! Model checking of net/formula pairs, on the reduced net when the formula
//! allows it.
//!
//! Every procedure works with the automaton of `¬f`. A counterexample found
//! on the reduced net is a shorter image of some original run, so it can be
//! trusted when `¬f` is closed under lengthening; an empty product on the
//! reduced net can be trusted when `¬f` is closed under shortening.

use std::fmt;
use std::time::Instant;

use serde::{Serialize, Serializer};

use crate::automaton::{check_emptiness, complement, product, Tgba};
use crate::error::Error;
use crate::lasso::Lasso;
use crate::limits::Limits;
use crate::ltl::{negate_to_nnf, Ltl};
use crate::petri::{build_kripke, reduce_fixpoint, PetriNet, PropertyBinding, ReductionStats};
use crate::stutter::{classify_automata, closure_cl, partition_automata, SensitivityClass};
use crate::translate::translate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Violated,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Violated => "violated",
            Outcome::Unknown => "unknown",
        })
    }
}

/// A run violating the formula, as a lasso over `ap`. Serialized in the
/// literal syntax, e.g. `"{p,q};{p}"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub ap: Vec<String>,
    pub lasso: Lasso,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.lasso.display(&self.ap))
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerdictStats {
    /// `None` when no reduction was attempted.
    pub places_removed: Option<usize>,
    pub transitions_removed: Option<usize>,
    /// Kripke states built, reduced and original together.
    pub states_explored: usize,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub trusted: bool,
    /// Which procedure and stage produced the verdict; stages that ran out
    /// of resources are listed after `;`.
    pub procedure: String,
    /// Class of the formula itself.
    pub sensitivity: SensitivityClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: VerdictStats,
}

struct Prepared {
    binding: PropertyBinding,
    pos: Tgba,
    neg: Tgba,
    class: SensitivityClass,
}

fn prepare(binding: &PropertyBinding, f: &Ltl, limits: &Limits) -> Result<Prepared, Error> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let binding = binding.restrict(&atoms)?;
    let pos = translate(f, limits)?;
    let neg = translate(&negate_to_nnf(f), limits)?;
    let class = classify_automata(&pos, &neg, limits)?;
    Ok(Prepared {
        binding,
        pos,
        neg,
        class,
    })
}

struct Reduced {
    stats: ReductionStats,
    ks: Tgba,
    states: usize,
}

fn reduce(net: &PetriNet, binding: &PropertyBinding, limits: &Limits) -> Result<Reduced, Error> {
    let (red, stats) = reduce_fixpoint(net, binding)?;
    let k = build_kripke(&red, binding, limits)?;
    Ok(Reduced {
        stats,
        states: k.num_states(),
        ks: k.to_tgba(),
    })
}

/// A lasso of `a ⊗ ks`, if any.
fn counterexample(a: &Tgba, ks: &Tgba, limits: &Limits) -> Result<Option<Witness>, Error> {
    let prod = product(a, ks, limits)?;
    Ok(check_emptiness(&prod, limits)?.map(|lasso| Witness {
        ap: prod.ap().to_vec(),
        lasso,
    }))
}

struct Tracker {
    start: Instant,
    stats: VerdictStats,
    class: SensitivityClass,
    skipped: Vec<String>,
}

impl Tracker {
    fn new(start: Instant, class: SensitivityClass) -> Self {
        Self {
            start,
            stats: VerdictStats::default(),
            class,
            skipped: Vec::new(),
        }
    }

    fn reduced(&mut self, r: &Reduced) {
        self.stats.places_removed = Some(r.stats.places_removed);
        self.stats.transitions_removed = Some(r.stats.transitions_removed);
        self.stats.states_explored += r.states;
    }

    fn verdict(mut self, procedure: &str, trusted: bool, cex: Option<Witness>) -> Verdict {
        self.stats.wall_ms = self.start.elapsed().as_millis() as u64;
        let mut procedure = procedure.to_string();
        for s in &self.skipped {
            procedure.push_str("; ");
            procedure.push_str(s);
        }
        Verdict {
            outcome: if cex.is_some() { Outcome::Violated } else { Outcome::Holds },
            trusted,
            procedure,
            sensitivity: self.class,
            witness: cex,
            stats: self.stats,
        }
    }

    /// Swallows resource errors, noting the stage that hit them.
    fn attempt<T>(&mut self, stage: &str, r: Result<T, Error>) -> Result<Option<T>, Error> {
        match r {
            Ok(x) => Ok(Some(x)),
            Err(e) if e.is_resource() => {
                self.skipped.push(format!("{stage} skipped: {e}"));
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// Decides `f` on the reduced net when the class of `f` makes one of the two
/// possible outcomes reliable; length-sensitive formulas are not attempted.
/// Unreliable outcomes are returned untrusted.
pub fn semi_decide(net: &PetriNet, binding: &PropertyBinding, f: &Ltl, limits: &Limits) -> Result<Verdict, Error> {
    let start = Instant::now();
    let p = prepare(binding, f, limits)?;
    let mut t = Tracker::new(start, p.class);
    if p.class == SensitivityClass::LS {
        t.stats.wall_ms = start.elapsed().as_millis() as u64;
        return Ok(Verdict {
            outcome: Outcome::Unknown,
            trusted: false,
            procedure: "semi:aborted".into(),
            sensitivity: p.class,
            witness: None,
            stats: t.stats,
        });
    }
    let red = reduce(net, &p.binding, limits)?;
    t.reduced(&red);
    let cex = counterexample(&p.neg, &red.ks, limits)?;
    let trusted = reliable(p.class, cex.is_none());
    Ok(t.verdict("semi", trusted, cex))
}

/// Whether an outcome on the reduced net carries over to the original net
/// for a formula of class `class`.
fn reliable(class: SensitivityClass, empty: bool) -> bool {
    let neg = class.dual();
    if empty {
        neg.shortening_insensitive()
    } else {
        neg.lengthening_insensitive()
    }
}

/// Proves `f` when the downward closure of `¬f` misses every run of the
/// reduced net; says nothing otherwise. Valid for any formula.
pub fn cl_extension_check(
    net: &PetriNet,
    binding: &PropertyBinding,
    f: &Ltl,
    limits: &Limits,
) -> Result<Option<Verdict>, Error> {
    let start = Instant::now();
    let p = prepare(binding, f, limits)?;
    let red = reduce(net, &p.binding, limits)?;
    let mut t = Tracker::new(start, p.class);
    t.reduced(&red);
    Ok(if closure_misses(&p.neg, &red.ks, limits)? {
        Some(t.verdict("cl-extension", true, None))
    } else {
        None
    })
}

fn closure_misses(neg: &Tgba, ks: &Tgba, limits: &Limits) -> Result<bool, Error> {
    Ok(counterexample(&closure_cl(neg), ks, limits)?.is_none())
}

/// Always returns a trusted verdict, working on the reduced net as long as
/// possible:
///
/// 1. check `¬f` on the reduced net and keep the answer if the class of the
///    formula makes it reliable;
/// 2. an empty product is confirmed when the downward closure of `¬f` also
///    misses the reduced net;
/// 3. a counterexample is confirmed when the reduced net has a run all of
///    whose longer words violate `f`;
/// 4. otherwise `¬f` is split into its four parts. Parts closed under
///    shortening are checked on the reduced net, the others on the original
///    one, counterexamples first. If the split runs out of resources the
///    whole formula is checked on the original net.
pub fn revisited_decide(
    net: &PetriNet,
    binding: &PropertyBinding,
    f: &Ltl,
    limits: &Limits,
) -> Result<Verdict, Error> {
    let start = Instant::now();
    let p = prepare(binding, f, limits)?;
    let mut t = Tracker::new(start, p.class);
    let red = reduce(net, &p.binding, limits)?;
    t.reduced(&red);
    let cex = counterexample(&p.neg, &red.ks, limits)?;
    if p.class != SensitivityClass::LS && reliable(p.class, cex.is_none()) {
        return Ok(t.verdict("revisited:optimistic", true, cex));
    }
    if cex.is_none() {
        if t.attempt("cl-extension", closure_misses(&p.neg, &red.ks, limits))? == Some(true) {
            return Ok(t.verdict("revisited:cl-extension", true, None));
        }
    } else {
        // runs of the reduced net with no longer word satisfying f
        let never_longer = complement(&closure_cl(&p.pos), limits);
        if let Some(a) = t.attempt("lengthening confirmation", never_longer)? {
            if let Some(w) = counterexample(&a, &red.ks, limits)? {
                return Ok(t.verdict("revisited:lengthening-confirmed", true, Some(w)));
            }
        }
    }

    let original = build_kripke(net, &p.binding, limits)?;
    t.stats.states_explored += original.num_states();
    let ks = original.to_tgba();
    let Some(parts) = t.attempt("partition", partition_automata(&p.neg, &p.pos, false, limits))? else {
        let cex = counterexample(&p.neg, &ks, limits)?;
        return Ok(t.verdict("revisited:original", true, cex));
    };
    // si_pm ∪ si_minus holds the words whose shorter words all violate f;
    // it is closed under shortening, so missing the reduced net is final
    if let Some(w) = counterexample(&parts.si_pm, &red.ks, limits)? {
        return Ok(t.verdict("revisited:partition:si_pm(reduced)", true, Some(w)));
    }
    let minus_reduced = counterexample(&parts.si_minus, &red.ks, limits)?.is_some();
    let order = [
        ("si_pm", &parts.si_pm, minus_reduced),
        ("si_plus", &parts.si_plus, true),
        ("si_minus", &parts.si_minus, minus_reduced),
        ("ss", &parts.ss, true),
    ];
    for (name, part, needed) in order {
        if !needed {
            continue;
        }
        if let Some(w) = counterexample(part, &ks, limits)? {
            return Ok(t.verdict(&format!("revisited:partition:{name}(original)"), true, Some(w)));
        }
    }
    Ok(t.verdict("revisited:partition", true, None))
}

/// Checks `f` on the unreduced state space. Returns whether it holds and a
/// violating run otherwise.
pub fn ground_truth_check(
    net: &PetriNet,
    binding: &PropertyBinding,
    f: &Ltl,
    limits: &Limits,
) -> Result<(bool, Option<Witness>), Error> {
    let atoms: Vec<String> = f.atoms().into_iter().collect();
    let binding = binding.restrict(&atoms)?;
    let neg = translate(&negate_to_nnf(f), limits)?;
    let k = build_kripke(net, &binding, limits)?;
    let cex = counterexample(&neg, &k.to_tgba(), limits)?;
    Ok((cex.is_none(), cex))
}

/// [`ground_truth_check`] packaged as a verdict.
pub fn ground_truth_verdict(
    net: &PetriNet,
    binding: &PropertyBinding,
    f: &Ltl,
    limits: &Limits,
) -> Result<Verdict, Error> {
    let start = Instant::now();
    let p = prepare(binding, f, limits)?;
    let k = build_kripke(net, &p.binding, limits)?;
    let mut t = Tracker::new(start, p.class);
    t.stats.states_explored = k.num_states();
    let cex = counterexample(&p.neg, &k.to_tgba(), limits)?;
    Ok(t.verdict("ground-truth", true, cex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;
    use crate::petri::parse_net;

    const FIG1: &str = include_str!("../../../data/fig1.net");

    fn fig1() -> (PetriNet, PropertyBinding) {
        parse_net(FIG1).unwrap()
    }

    fn l() -> Limits {
        Limits::default()
    }

    #[test]
    fn always_p_fails_on_fig1() {
        let (net, b) = fig1();
        let f = parse("G p").unwrap();
        let (holds, w) = ground_truth_check(&net, &b, &f, &l()).unwrap();
        assert!(!holds && w.is_some());
        let v = semi_decide(&net, &b, &f, &l()).unwrap();
        assert_eq!((v.outcome, v.trusted), (Outcome::Violated, true));
        assert!(v.witness.is_some());
    }

    #[test]
    fn true_holds_everywhere() {
        let (net, b) = fig1();
        let f = parse("true").unwrap();
        assert!(ground_truth_check(&net, &b, &f, &l()).unwrap().0);
        let v = cl_extension_check(&net, &b, &parse("X true").unwrap(), &l()).unwrap().unwrap();
        assert_eq!((v.outcome, v.trusted), (Outcome::Holds, true));
    }

    #[test]
    fn length_sensitive_is_not_attempted() {
        let (net, b) = fig1();
        let v = semi_decide(&net, &b, &parse("X p").unwrap(), &l()).unwrap();
        assert_eq!((v.outcome, v.trusted), (Outcome::Unknown, false));
        assert_eq!(v.stats.places_removed, None);
    }

    #[test]
    fn q_never_returns() {
        let (net, b) = fig1();
        let f = parse("G(!q -> G !q)").unwrap();
        let v = semi_decide(&net, &b, &f, &l()).unwrap();
        assert!(v.trusted);
        assert_eq!(v.outcome == Outcome::Holds, ground_truth_check(&net, &b, &f, &l()).unwrap().0);
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn revisited_matches_ground_truth_on_fig1() {
        let (net, b) = fig1();
        for text in ["X p", "X X !q", "p U (!p && X !q)", "F(!p && X(!p && X q))", "G p", "F G !q"] {
            let f = parse(text).unwrap();
            let v = revisited_decide(&net, &b, &f, &l()).unwrap();
            let (holds, _) = ground_truth_check(&net, &b, &f, &l()).unwrap();
            assert!(v.trusted, "{text}");
            assert_eq!(v.outcome == Outcome::Holds, holds, "{text}: {}", v.procedure);
        }
    }

    #[test]
    fn verdict_json_shape() {
        let (net, b) = fig1();
        let v = semi_decide(&net, &b, &parse("G p").unwrap(), &l()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["outcome"], "violated");
        assert_eq!(json["sensitivity"], "SI");
        assert!(json["witness"].is_string());
        for k in ["places_removed", "transitions_removed", "states_explored", "wall_ms"] {
            assert!(json["stats"].get(k).is_some(), "{k}");
        }
    }
}
