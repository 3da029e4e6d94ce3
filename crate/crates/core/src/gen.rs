//! Seeded random formulas and nets for property suites and benchmarks.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ltl::Ltl;
use crate::petri::{CmpOp, LinearSum, PetriNet, Predicate, PropertyBinding};

pub const SEED_VAR: &str = "STUTTERKIT_SEED";

/// The seed in `STUTTERKIT_SEED`, or `default` when unset or unparsable.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

/// Shape of generated formulas.
#[derive(Clone, Copy, Debug)]
pub struct FormulaShape {
    /// Atoms are drawn from the first `atoms` names of [`ATOMS`].
    pub atoms: usize,
    /// Maximum nesting of temporal operators.
    pub temporal_depth: usize,
    /// Maximum number of operators.
    pub size: usize,
}

impl Default for FormulaShape {
    fn default() -> Self {
        Self {
            atoms: 3,
            temporal_depth: 3,
            size: 8,
        }
    }
}

pub fn random_formula<R: Rng>(rng: &mut R, shape: FormulaShape) -> Ltl {
    grow(rng, &ATOMS[..shape.atoms.clamp(1, ATOMS.len())], shape.temporal_depth, shape.size)
}

fn grow<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize, size: usize) -> Ltl {
    if size == 0 || rng.random_bool(0.2) {
        return if rng.random_bool(0.04) {
            if rng.random() { Ltl::True } else { Ltl::False }
        } else {
            Ltl::atom(*atoms.choose(rng).expect("atoms"))
        };
    }
    let temporal = depth > 0;
    let ops: &[u8] = if temporal {
        &[0, 1, 2, 3, 4, 5, 5, 6, 6, 7, 7, 8, 9]
    } else {
        &[0, 1, 2, 3]
    };
    let unary = |rng: &mut R, d| grow(rng, atoms, d, size - 1);
    let binary = |rng: &mut R, d| {
        let left = rng.random_range(0..size);
        (grow(rng, atoms, d, left), grow(rng, atoms, d, size - 1 - left))
    };
    match *ops.choose(rng).expect("ops") {
        0 => Ltl::not(unary(rng, depth)),
        1 => {
            let (a, b) = binary(rng, depth);
            Ltl::and(a, b)
        }
        2 => {
            let (a, b) = binary(rng, depth);
            Ltl::or(a, b)
        }
        3 => {
            let (a, b) = binary(rng, depth);
            Ltl::implies(a, b)
        }
        4 => Ltl::next(unary(rng, depth - 1)),
        5 => Ltl::eventually(unary(rng, depth - 1)),
        6 => Ltl::globally(unary(rng, depth - 1)),
        7 => {
            let (a, b) = binary(rng, depth - 1);
            Ltl::until(a, b)
        }
        8 => {
            let (a, b) = binary(rng, depth - 1);
            Ltl::release(a, b)
        }
        _ => {
            let (a, b) = binary(rng, depth - 1);
            Ltl::weak_until(a, b)
        }
    }
}

/// `count` formulas from `seed`, each over a random number of atoms up to
/// `shape.atoms`.
pub fn formula_corpus(seed: u64, count: usize, shape: FormulaShape) -> Vec<Ltl> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let atoms = rng.random_range(1..=shape.atoms.max(1));
            random_formula(&mut rng, FormulaShape { atoms, ..shape })
        })
        .collect()
}

/// A random bounded-looking net with at most `max_places` places and atoms
/// `p`, `q`, `r` over its markings.
///
/// Most nets are built from sequential processes, some of them talking
/// through a channel place, which makes agglomerations likely; the rest
/// have arbitrary arcs. Boundedness is not guaranteed.
pub fn random_net<R: Rng>(rng: &mut R, max_places: usize) -> (PetriNet, PropertyBinding) {
    let max_places = max_places.max(2);
    let net = if rng.random_bool(0.75) {
        process_net(rng, max_places)
    } else {
        arbitrary_net(rng, max_places)
    };
    let binding = random_binding(rng, &net);
    (net, binding)
}

fn empty_transition(net: &mut PetriNet, name: String) -> usize {
    net.transitions.push(name);
    net.w_minus.push(vec![0; net.places.len()]);
    net.w_plus.push(vec![0; net.places.len()]);
    net.transitions.len() - 1
}

fn process_net<R: Rng>(rng: &mut R, max_places: usize) -> PetriNet {
    let channel = max_places >= 3 && rng.random_bool(0.5);
    let mut budget = max_places - channel as usize;
    let mut lengths = Vec::new();
    while budget >= 2 && lengths.len() < 3 && (lengths.is_empty() || rng.random_bool(0.6)) {
        let l = rng.random_range(2..=budget.min(4));
        lengths.push(l);
        budget -= l;
    }
    if lengths.is_empty() {
        lengths.push(budget.max(1));
    }
    let mut net = PetriNet {
        places: Vec::new(),
        transitions: Vec::new(),
        w_minus: Vec::new(),
        w_plus: Vec::new(),
        m0: Vec::new(),
    };
    let mut procs = Vec::new();
    for (i, &l) in lengths.iter().enumerate() {
        let first = net.places.len();
        for j in 0..l {
            net.places.push(format!("P{i}_{j}"));
            net.m0.push((j == 0) as u32);
        }
        procs.push((first, l));
    }
    if channel {
        net.places.push("chan".into());
        net.m0.push(0);
    }
    let n = net.places.len();
    let mut steps = Vec::new();
    for (i, &(first, l)) in procs.iter().enumerate() {
        let cyclic = rng.random_bool(0.6);
        let last = if cyclic { l } else { l - 1 };
        for j in 0..last {
            let t = empty_transition(&mut net, format!("t{i}_{j}"));
            net.w_minus[t][first + j] = 1;
            net.w_plus[t][first + (j + 1) % l] = 1;
            steps.push(t);
        }
        if rng.random_bool(0.25) && l >= 3 {
            // a choice: skip one position
            let t = empty_transition(&mut net, format!("s{i}"));
            net.w_minus[t][first] = 1;
            net.w_plus[t][first + 2] = 1;
            steps.push(t);
        }
    }
    if channel && steps.len() >= 2 {
        let send = *steps.choose(rng).expect("steps");
        let recv = *steps.choose(rng).expect("steps");
        net.w_plus[send][n - 1] += 1;
        if recv != send {
            net.w_minus[recv][n - 1] += 1;
        }
    }
    if rng.random_bool(0.3) && !steps.is_empty() {
        // a test arc on some other place
        let t = *steps.choose(rng).expect("steps");
        let p = rng.random_range(0..n);
        if net.w_minus[t][p] == 0 && net.w_plus[t][p] == 0 {
            net.w_minus[t][p] = 1;
            net.w_plus[t][p] = 1;
        }
    }
    net
}

fn arbitrary_net<R: Rng>(rng: &mut R, max_places: usize) -> PetriNet {
    let n = rng.random_range(2..=max_places);
    let m = rng.random_range(1..=n + 1);
    let mut net = PetriNet {
        places: (0..n).map(|i| format!("P{i}")).collect(),
        transitions: Vec::new(),
        w_minus: Vec::new(),
        w_plus: Vec::new(),
        m0: (0..n).map(|_| rng.random_bool(0.35) as u32).collect(),
    };
    if net.m0.iter().all(|&x| x == 0) {
        net.m0[0] = 1;
    }
    for i in 0..m {
        let t = empty_transition(&mut net, format!("t{i}"));
        let ins = rng.random_range(1..=2);
        let outs = rng.random_range(0..=2);
        for _ in 0..ins {
            net.w_minus[t][rng.random_range(0..n)] = 1;
        }
        for _ in 0..outs {
            let p = rng.random_range(0..n);
            net.w_plus[t][p] = if rng.random_bool(0.1) { 2 } else { 1 };
        }
    }
    net
}

fn random_binding<R: Rng>(rng: &mut R, net: &PetriNet) -> PropertyBinding {
    let place = |rng: &mut R| net.places.choose(rng).expect("places").clone();
    let atoms = ATOMS
        .iter()
        .map(|&name| {
            let mut lhs = LinearSum {
                terms: vec![(1, place(rng))],
                constant: 0,
            };
            if rng.random_bool(0.2) {
                lhs.terms.push((1, place(rng)));
            }
            let (op, k) = if rng.random_bool(0.7) { (CmpOp::Ge, 1) } else { (CmpOp::Eq, 0) };
            let rhs = LinearSum {
                terms: Vec::new(),
                constant: k,
            };
            (name.to_string(), Predicate::Cmp(lhs, op, rhs))
        })
        .collect();
    PropertyBinding { atoms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    #[test]
    fn corpus_is_reproducible() {
        let shape = FormulaShape::default();
        assert_eq!(formula_corpus(7, 20, shape), formula_corpus(7, 20, shape));
        assert_ne!(formula_corpus(7, 20, shape), formula_corpus(8, 20, shape));
    }

    #[test]
    fn shape_is_respected() {
        for f in formula_corpus(1, 300, FormulaShape::default()) {
            assert!(f.temporal_depth() <= 3, "{f}");
            assert!(f.atoms().len() <= 3);
            assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn nets_stay_small_and_valid() {
        let mut r = rng(3);
        for _ in 0..200 {
            let (net, b) = random_net(&mut r, 8);
            assert!(net.num_places() <= 8);
            let text = net.to_text(&b);
            assert_eq!(crate::petri::parse_net(&text).unwrap(), (net, b));
        }
    }
}
