use std::path::PathBuf;
use std::process::{Command, Output};

fn stutterkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stutterkit"))
        .args(args)
        .current_dir(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../.."))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_prints_the_class() {
    for (f, c) in [("G p", "SI"), ("X p", "LS"), ("G(p -> X !p)", "ShI"), ("F(p && X p)", "LI")] {
        let o = stutterkit(&["classify", "-f", f]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), c, "{f}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(stutterkit(&["classify", "-f", "G ("]).status.code(), Some(1));
    assert_eq!(stutterkit(&["classify"]).status.code(), Some(1));
    assert_eq!(stutterkit(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(stutterkit(&["--help"]).status.code(), Some(0));
    assert_eq!(stutterkit(&["classify", "-f", "G F p", "--state-cap", "1"]).status.code(), Some(2));
    assert_eq!(stutterkit(&["check", "--net", "data/fig1.net", "-f", "G nope"]).status.code(), Some(1));
    assert_eq!(stutterkit(&["check", "--net", "missing.net", "-f", "G p"]).status.code(), Some(1));
}

#[test]
fn check_reports_a_witness() {
    let o = stutterkit(&["check", "--net", "data/fig1.net", "-f", "G p"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "violated");
    assert_eq!(v["trusted"], true);
    assert_eq!(v["sensitivity"], "SI");
    assert!(v["witness"].as_str().unwrap().contains(';'));
    assert_eq!(v["stats"]["places_removed"], 2);
}

#[test]
fn require_trusted_fails_on_untrusted_verdicts() {
    // X p is stutter-sensitive, so a verdict on the reduced net is never trusted.
    let args = ["check", "--net", "data/fig1.net", "-f", "X p", "--require-trusted"];
    let o = stutterkit(&args);
    assert_eq!(o.status.code(), Some(3));
    let mut rev = args.to_vec();
    rev.extend(["--procedure", "revisited"]);
    assert_eq!(stutterkit(&rev).status.code(), Some(0));
}

#[test]
fn truth_agrees_with_revisited() {
    for f in ["G p", "F G !p", "G(p -> X !p)", "X X q"] {
        let t: serde_json::Value =
            serde_json::from_slice(&stutterkit(&["truth", "--net", "data/fig1.net", "-f", f]).stdout).unwrap();
        let r: serde_json::Value = serde_json::from_slice(
            &stutterkit(&["check", "--net", "data/fig1.net", "-f", f, "--procedure", "revisited"]).stdout,
        )
        .unwrap();
        assert_eq!(t["outcome"], r["outcome"], "{f}");
    }
}

#[test]
fn extra_atoms_extend_the_binding() {
    let o = stutterkit(&["check", "--net", "data/fig1.net", "-f", "F done", "--atom", "done := m(a2) >= 1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["outcome"], "holds");
}

#[test]
fn reduce_prints_a_net_that_parses() {
    let o = stutterkit(&["reduce", "--net", "data/fig1.net", "-f", "G p"]);
    assert!(o.status.success());
    let (net, b) = stutterkit::petri::parse_net(&stdout(&o)).unwrap();
    assert_eq!(net.num_places(), 6);
    assert_eq!(b.names(), vec!["p"]);
}

#[test]
fn partition_prints_four_automata() {
    let o = stutterkit(&["partition", "-f", "F(p && X p)"]);
    let text = stdout(&o);
    for part in ["si_pm", "si_minus", "si_plus", "ss"] {
        assert!(text.contains(&format!("/* {part} */")), "{part}");
    }
    assert_eq!(text.matches("--END--").count(), 4);
}

#[test]
fn batch_is_stable_across_thread_counts() {
    let dir = std::env::temp_dir();
    let one = dir.join(format!("stutterkit-batch1-{}.json", std::process::id()));
    let many = dir.join(format!("stutterkit-batch4-{}.json", std::process::id()));
    let run = |jobs: &str, path: &PathBuf| {
        let o = stutterkit(&[
            "batch", "--formulas", "data/dwyer55.ltl", "--net", "data/fig1.net", "--atom", "r := m(a2) >= 1",
            "--atom", "s := m(b1) >= 1", "--atom", "t := m(chan) >= 1", "--atom", "z := m(a1) >= 1",
            "--jobs", jobs, "--json", path.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        let _ = std::fs::remove_file(path);
        strip_stats(&mut v);
        v
    };
    let a = run("1", &one);
    let b = run("4", &many);
    assert_eq!(a, b);
    let total: u64 = a["summary"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total as usize, a["rows"].as_array().unwrap().len());
    assert_eq!(total, 55);
}

fn strip_stats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Object(m) => {
            m.remove("stats");
            m.values_mut().for_each(strip_stats);
        }
        serde_json::Value::Array(a) => a.iter_mut().for_each(strip_stats),
        _ => {}
    }
}
