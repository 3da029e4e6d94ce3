mod common;

use std::collections::BTreeSet;

use common::{all_lassos, reachable_markings, reduction_violations};
use stutterkit::automaton::accepts_lasso;
use stutterkit::gen::{random_net, rng};
use stutterkit::lasso::{parse_lasso, Lasso};
use stutterkit::petri::{
    agglomerate, build_kripke, find_agglomerations, parse_net, reduce_fixpoint, support_and_invisibles, AggloKind,
    KripkeGraph, PetriNet, PropertyBinding,
};
use stutterkit::Limits;

const FIG1: &str = include_str!("../../../data/fig1.net");

fn kripke(net: &PetriNet, b: &PropertyBinding) -> KripkeGraph {
    build_kripke(net, b, &Limits::default()).unwrap()
}

/// The language of `k` restricted to lassos within the bounds.
fn language(k: &KripkeGraph, stem_max: usize, loop_max: usize) -> BTreeSet<Lasso> {
    let a = k.to_tgba();
    all_lassos(k.ap.len(), stem_max, loop_max)
        .into_iter()
        .filter(|w| accepts_lasso(&a, w))
        .collect()
}

fn words(ap: &[String], ws: &[&str]) -> BTreeSet<Lasso> {
    ws.iter().map(|w| parse_lasso(w, ap).unwrap().normalized()).collect()
}

#[test]
fn fig1_original_has_three_runs() {
    let (net, b) = parse_net(FIG1).unwrap();
    assert_eq!(net.m0.iter().filter(|&&x| x > 0).count(), 4);
    let k = kripke(&net, &b);
    assert_eq!(k.num_states(), 7);
    let expected = words(
        &k.ap,
        &[
            "{p,q}{p,q}{p,q}{q};{}",
            "{p,q}{p,q}{q}{q};{}",
            "{p,q}{q}{q}{q};{}",
        ],
    );
    assert_eq!(language(&k, 6, 2), expected);
}

#[test]
fn fig1_fusing_beta_leaves_two_runs() {
    let (net, b) = parse_net(FIG1).unwrap();
    let b1 = net.place_index("b1").unwrap();
    let red = agglomerate(&net, &b, b1, AggloKind::Pre).unwrap();
    assert!(red.transitions.contains(&"z40.send".to_string()));
    let k = kripke(&red, &b);
    let expected = words(&k.ap, &["{p,q}{q}{q};{}", "{p,q}{p,q}{q};{}"]);
    assert_eq!(language(&k, 6, 2), expected);
}

#[test]
fn fig1_fixpoint_leaves_one_run() {
    let (net, b) = parse_net(FIG1).unwrap();
    let (red, stats) = reduce_fixpoint(&net, &b).unwrap();
    assert_eq!(stats.places_removed, 2);
    let k = kripke(&red, &b);
    assert_eq!(language(&k, 6, 2), words(&k.ap, &["{p,q}{q};{}"]));
    let (again, more) = reduce_fixpoint(&red, &b).unwrap();
    assert_eq!(again, red);
    assert_eq!(more.places_removed, 0);
}

#[test]
fn fig1_beta_is_invisible_and_b1_is_a_candidate() {
    let (net, b) = parse_net(FIG1).unwrap();
    let (support, inv) = support_and_invisibles(&net, &b).unwrap();
    let names: BTreeSet<&str> = inv.iter().map(|&t| net.transitions[t].as_str()).collect();
    assert_eq!(names, BTreeSet::from(["z40", "send"]));
    let b1 = net.place_index("b1").unwrap();
    assert!(find_agglomerations(&net, &support, &inv).contains(&(b1, AggloKind::Pre)));
}

fn bounded_random_nets(seed: u64, count: usize) -> Vec<(PetriNet, PropertyBinding)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let (net, b) = random_net(&mut r, 6);
        if reachable_markings(&net, 200).is_some() {
            out.push((net, b));
        }
    }
    out
}

#[test]
fn every_agglomeration_is_a_reduction() {
    let mut applied = 0;
    for (net, b) in bounded_random_nets(11, 60) {
        let b = b.restrict(&["p".into(), "q".into()]).unwrap();
        let (red, stats) = reduce_fixpoint(&net, &b).unwrap();
        if stats.applied.is_empty() {
            continue;
        }
        applied += 1;
        let (a, bb) = reduction_violations(&kripke(&net, &b), &kripke(&red, &b), 3, 3);
        assert!(a.is_empty() && bb.is_empty(), "{}\n(a) {a:?}\n(b) {bb:?}", net.to_text(&b));
    }
    assert!(applied >= 10, "only {applied} nets reduced");
}

#[test]
fn pre_agglomerated_feeders_commute() {
    for (net, b) in bounded_random_nets(5, 80) {
        let (support, inv) = support_and_invisibles(&net, &b).unwrap();
        let markings = reachable_markings(&net, 200).unwrap();
        for (p, kind) in find_agglomerations(&net, &support, &inv) {
            if kind != AggloKind::Pre {
                continue;
            }
            for h in net.preset_of_place(p) {
                for m in &markings {
                    let Some(m1) = net.fire(m, h) else { continue };
                    for t in 0..net.num_transitions() {
                        let Some(after) = net.fire(&m1, t) else { continue };
                        if net.w_minus[t][p] > 0 {
                            continue;
                        }
                        let swapped = net.fire(m, t).and_then(|m2| net.fire(&m2, h));
                        assert_eq!(swapped, Some(after), "{} {} at {m:?}", net.transitions[h], net.transitions[t]);
                    }
                }
            }
        }
    }
}

#[test]
fn fused_transitions_change_labels_like_their_visible_part() {
    let mut checked = 0;
    for (net, b) in bounded_random_nets(9, 80) {
        let (support, inv) = support_and_invisibles(&net, &b).unwrap();
        let Some(&(p, kind)) = find_agglomerations(&net, &support, &inv).first() else { continue };
        let red = agglomerate(&net, &b, p, kind).unwrap();
        let k = kripke(&red, &b);
        let orig_index = |name: &str| net.transitions.iter().position(|t| t == name).expect("known transition");
        for t in 0..red.num_transitions() {
            let name = &red.transitions[t];
            if net.transitions.contains(name) {
                continue;
            }
            let (h, f) = name.split_once('.').expect("fused name");
            let visible = orig_index(if kind == AggloKind::Pre { f } else { h });
            for m in &k.markings {
                let Some(m2) = red.fire(m, t) else { continue };
                for &sp in &support {
                    let i = red.place_index(&net.places[sp]).expect("support places survive");
                    let effect = net.w_plus[visible][sp] as i64 - net.w_minus[visible][sp] as i64;
                    assert_eq!(m2[i] as i64 - m[i] as i64, effect, "{name} at {m:?}");
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn state_space_is_deterministic() {
    let (net, b) = parse_net(FIG1).unwrap();
    let a = kripke(&net, &b);
    let (net2, b2) = parse_net(FIG1).unwrap();
    assert_eq!(a, kripke(&net2, &b2));
}

#[test]
fn empty_net_loops_on_its_initial_label() {
    let (net, b) = parse_net("place only init 1\natom p := m(only) >= 1\n").unwrap();
    let k = kripke(&net, &b);
    assert_eq!(k.num_states(), 1);
    assert_eq!(language(&k, 2, 2), words(&k.ap, &[";{p}"]));
}
