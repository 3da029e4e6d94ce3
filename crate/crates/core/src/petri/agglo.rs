use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{support_and_invisibles, PetriNet, PropertyBinding};
use crate::error::NetError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AggloKind {
    Pre,
    Post,
}

impl fmt::Display for AggloKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AggloKind::Pre => "pre",
            AggloKind::Post => "post",
        })
    }
}

/// Side conditions for agglomerating a place `p`. The first six apply to
/// both kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    NotInSupport,
    InitiallyUnmarked,
    /// `p` has at least one feeder and one consumer.
    Connected,
    DistinctFeedersAndConsumers,
    /// Every feeder puts exactly one token in `p`.
    FeedersProduceOne,
    /// Every consumer takes exactly one token from `p`.
    ConsumersTakeOne,
    FeedersStutter,
    /// `p` is the only output of every feeder.
    SingleOutput,
    /// Every feeder strictly consumes from some input place.
    DivergentFree,
    /// Every input place of a feeder feeds nothing else.
    StronglyQuasiPersistent,
    ConsumersStutter,
    /// `p` is the only input of every consumer.
    NoOtherInputs,
}

impl Condition {
    const SHARED: [Condition; 6] = [
        Condition::NotInSupport,
        Condition::InitiallyUnmarked,
        Condition::Connected,
        Condition::DistinctFeedersAndConsumers,
        Condition::FeedersProduceOne,
        Condition::ConsumersTakeOne,
    ];

    pub fn applies_to(self, kind: AggloKind) -> bool {
        use Condition::*;
        match self {
            FeedersStutter | SingleOutput | DivergentFree | StronglyQuasiPersistent => kind == AggloKind::Pre,
            ConsumersStutter | NoOtherInputs => kind == AggloKind::Post,
            _ => true,
        }
    }

    fn all(kind: AggloKind) -> impl Iterator<Item = Condition> {
        use Condition::*;
        let specific: &'static [Condition] = match kind {
            AggloKind::Pre => &[FeedersStutter, SingleOutput, DivergentFree, StronglyQuasiPersistent],
            AggloKind::Post => &[ConsumersStutter, NoOtherInputs],
        };
        Self::SHARED.into_iter().chain(specific.iter().copied())
    }

    pub fn describe(self) -> &'static str {
        use Condition::*;
        match self {
            NotInSupport => "place is outside the support",
            InitiallyUnmarked => "place is initially unmarked",
            Connected => "place has feeders and consumers",
            DistinctFeedersAndConsumers => "no transition both feeds and consumes the place",
            FeedersProduceOne => "feeders produce a single token",
            ConsumersTakeOne => "consumers require a single token",
            FeedersStutter => "feeders are invisible",
            SingleOutput => "place is the single output of each feeder",
            DivergentFree => "each feeder strictly consumes from an input place",
            StronglyQuasiPersistent => "inputs of each feeder have no other consumer",
            ConsumersStutter => "consumers are invisible",
            NoOtherInputs => "place is the single input of each consumer",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AggloError {
    #[error("cannot {kind}-agglomerate `{place}`: {failed} does not hold")]
    Rejected {
        place: String,
        kind: AggloKind,
        failed: Condition,
    },
    #[error(transparent)]
    Net(#[from] NetError),
}

fn holds(
    net: &PetriNet,
    p: usize,
    c: Condition,
    support: &BTreeSet<usize>,
    invisibles: &BTreeSet<usize>,
) -> bool {
    use Condition::*;
    let feeders = net.preset_of_place(p);
    let consumers = net.postset_of_place(p);
    match c {
        NotInSupport => !support.contains(&p),
        InitiallyUnmarked => net.m0[p] == 0,
        Connected => !feeders.is_empty() && !consumers.is_empty(),
        DistinctFeedersAndConsumers => feeders.iter().all(|h| !consumers.contains(h)),
        FeedersProduceOne => feeders.iter().all(|&h| net.w_plus[h][p] == 1),
        ConsumersTakeOne => consumers.iter().all(|&f| net.w_minus[f][p] == 1),
        FeedersStutter => feeders.iter().all(|h| invisibles.contains(h)),
        SingleOutput => feeders.iter().all(|&h| net.postset_of_transition(h) == [p]),
        DivergentFree => feeders.iter().all(|&h| {
            net.preset_of_transition(h)
                .into_iter()
                .any(|p1| net.w_plus[h][p1] < net.w_minus[h][p1])
        }),
        StronglyQuasiPersistent => feeders.iter().all(|&h| {
            net.preset_of_transition(h)
                .into_iter()
                .all(|p2| net.postset_of_place(p2) == [h])
        }),
        ConsumersStutter => consumers.iter().all(|f| invisibles.contains(f)),
        NoOtherInputs => consumers.iter().all(|&f| net.preset_of_transition(f) == [p]),
    }
}

/// Every condition of `kind` that fails for place `p`, in a fixed order.
pub fn check_agglomeration(
    net: &PetriNet,
    p: usize,
    kind: AggloKind,
    support: &BTreeSet<usize>,
    invisibles: &BTreeSet<usize>,
) -> Vec<Condition> {
    Condition::all(kind)
        .filter(|&c| !holds(net, p, c, support, invisibles))
        .collect()
}

/// Places that can be agglomerated, post-agglomerations first, then pre,
/// each by ascending place index.
pub fn find_agglomerations(
    net: &PetriNet,
    support: &BTreeSet<usize>,
    invisibles: &BTreeSet<usize>,
) -> Vec<(usize, AggloKind)> {
    let mut out = Vec::new();
    for kind in [AggloKind::Post, AggloKind::Pre] {
        for p in 0..net.num_places() {
            if check_agglomeration(net, p, kind, support, invisibles).is_empty() {
                out.push((p, kind));
            }
        }
    }
    out
}

/// Replaces place `p`, its feeders and its consumers by one transition
/// `h.f` per feeder `h` and consumer `f`, whose weights are the sums of
/// those of `h` and `f`.
pub fn agglomerate(
    net: &PetriNet,
    binding: &PropertyBinding,
    p: usize,
    kind: AggloKind,
) -> Result<PetriNet, AggloError> {
    let (support, invisibles) = support_and_invisibles(net, binding)?;
    if let Some(&failed) = check_agglomeration(net, p, kind, &support, &invisibles).first() {
        return Err(AggloError::Rejected {
            place: net.places[p].clone(),
            kind,
            failed,
        });
    }
    Ok(fuse(net, p))
}

fn fuse(net: &PetriNet, p: usize) -> PetriNet {
    let feeders = net.preset_of_place(p);
    let consumers = net.postset_of_place(p);
    let drop_p = |w: &[u32]| -> Vec<u32> {
        w.iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, &x)| x)
            .collect()
    };
    let mut out = PetriNet {
        places: drop_p_names(&net.places, p),
        transitions: Vec::new(),
        w_minus: Vec::new(),
        w_plus: Vec::new(),
        m0: drop_p(&net.m0),
    };
    for t in 0..net.num_transitions() {
        if feeders.contains(&t) || consumers.contains(&t) {
            continue;
        }
        out.transitions.push(net.transitions[t].clone());
        out.w_minus.push(drop_p(&net.w_minus[t]));
        out.w_plus.push(drop_p(&net.w_plus[t]));
    }
    let add = |a: &[u32], b: &[u32]| -> Vec<u32> { drop_p(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>()) };
    for &h in &feeders {
        for &f in &consumers {
            let base = format!("{}.{}", net.transitions[h], net.transitions[f]);
            let mut name = base.clone();
            let mut n = 2;
            while out.transitions.contains(&name) {
                name = format!("{base}_{n}");
                n += 1;
            }
            out.transitions.push(name);
            out.w_minus.push(add(&net.w_minus[h], &net.w_minus[f]));
            out.w_plus.push(add(&net.w_plus[h], &net.w_plus[f]));
        }
    }
    out
}

fn drop_p_names(names: &[String], p: usize) -> Vec<String> {
    names
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p)
        .map(|(_, n)| n.clone())
        .collect()
}

/// What a reduction to the fixpoint removed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReductionStats {
    pub places_removed: usize,
    /// Feeders and consumers discarded, counting each original or fused
    /// transition once per agglomeration that removed it.
    pub transitions_removed: usize,
    pub transitions_added: usize,
    /// `(place, kind)` in application order.
    pub applied: Vec<(String, AggloKind)>,
}

/// Applies agglomerations until none is possible, always taking the first
/// candidate of [`find_agglomerations`].
pub fn reduce_fixpoint(net: &PetriNet, binding: &PropertyBinding) -> Result<(PetriNet, ReductionStats), NetError> {
    let mut net = net.clone();
    let mut stats = ReductionStats::default();
    loop {
        let (support, invisibles) = support_and_invisibles(&net, binding)?;
        let Some(&(p, kind)) = find_agglomerations(&net, &support, &invisibles).first() else {
            return Ok((net, stats));
        };
        let (feeders, consumers) = (net.preset_of_place(p).len(), net.postset_of_place(p).len());
        stats.places_removed += 1;
        stats.transitions_removed += feeders + consumers;
        stats.transitions_added += feeders * consumers;
        stats.applied.push((net.places[p].clone(), kind));
        net = fuse(&net, p);
    }
}
