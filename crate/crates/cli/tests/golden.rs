use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_ordlab"))
        .args(args)
        .env_remove("ORD_LAB_TRACE")
        .output()
        .unwrap();
    (
        String::from_utf8(out.stdout).unwrap().trim_end().to_string(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn stdout(args: &[&str]) -> String {
    let (o, e, code) = run(args);
    assert_eq!(code, 0, "{args:?}: {e}");
    o
}

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn arithmetic() {
    assert_eq!(stdout(&["norm", "phi(1,0)+w+3"]), "e(0)+w+3");
    assert_eq!(stdout(&["norm", "w^w^w + phi(0, 1)"]), "w^w^w+w");
    assert_eq!(stdout(&["cmp", "w*5+3", "w^w"]), "LT");
    assert_eq!(stdout(&["cmp", "e(0)", "w^e(0)"]), "EQ");
    assert_eq!(stdout(&["cmp", "phi(2,0)", "e(e(0))"]), "GT");
    assert_eq!(stdout(&["add", "w+1", "w"]), "w*2");
    assert_eq!(stdout(&["sub", "w", "w^2+1"]), "w^2+1");
    assert_eq!(stdout(&["sub", "w^2", "w"]), "-1");
    assert_eq!(stdout(&["pow", "w+1"]), "w^(w+1)");
}

#[test]
fn reach_queries() {
    assert_eq!(stdout(&["leq1", "w^w", "w^w+1"]), "true");
    assert_eq!(stdout(&["leq1", "w", "w+1"]), "false");
    assert_eq!(stdout(&["leq1", "w^2+w", "w^2+w+5"]), "false");
    assert_eq!(stdout(&["mreach", "e(0)"]), "e(0)*2 (at_cap=false)");
    assert_eq!(stdout(&["mreach", "w^w^2"]), "w^w^2+2 (at_cap=false)");
    assert_eq!(stdout(&["mreach", "phi(w,0)"]), "w^(phi(w,0)+1) (at_cap=true)");
    assert_eq!(stdout(&["tset", "w^w", "w^w*2+5"]), "{w^w*2+5, 5}");
    assert_eq!(stdout(&["gmap", "w^w", "w^w^2", "w^w*2+5"]), "w^w^2*2+5");
    assert_eq!(
        stdout(&["class", "e(1)", "--t", "e(1)*2", "--member", "e(1)", "--list", "2"]),
        "C(1,1,0)\nmember e(1): false\nlist {e(w), e(w*2)}"
    );
    assert_eq!(stdout(&["class", "w^w", "--next", "5"]), "C(0,1,0)\nnext w^w");
}

#[test]
fn traces() {
    let plain: Value = serde_json::from_str(&stdout(&["--json", "leq1", "e(0)", "e(0)*2"])).unwrap();
    assert_eq!(plain["verdict"], true);
    assert!(plain.get("trace").is_none());
    let traced: Value =
        serde_json::from_str(&stdout(&["--json", "--trace", "leq1", "e(0)", "e(0)*2"])).unwrap();
    let steps = traced["trace"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["rule"], "membership");
    let out = Command::new(env!("CARGO_BIN_EXE_ordlab"))
        .args(["--json", "leq1", "w^w", "w^w+2"])
        .env("ORD_LAB_TRACE", "1")
        .output()
        .unwrap();
    let env: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(env["verdict"], false);
    assert!(!env["trace"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let (_, err, code) = run(&["leq1", "phi(w,0)", "w^(phi(w,0)+1)+1"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("out of scope"));
    assert_eq!(run(&["tset", "w", "w^2"]).2, 2);
    assert_eq!(run(&["norm", "w+"]).2, 1);
    assert_eq!(run(&["mreach", "w+1"]).2, 1);
    assert_eq!(run(&["frobnicate"]).2, 1);
    assert_eq!(run(&["cmp", "w"]).2, 1);
    assert_eq!(run(&["--help"]).2, 0);
    let (o, _, code) = run(&["--json", "norm", "(w"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&o).unwrap();
    assert_eq!(v["exit"], 1);
}

#[test]
fn embeddings_and_certificates() {
    assert_eq!(
        stdout(&["embed", "w^w", "5", "w^w", "w^w*2+5"]),
        "covering delta=w\n5 -> 5\nw^w -> w\nw^w*2+5 -> w*2+5"
    );
    assert_eq!(stdout(&["embed", "w^w", "5", "w"]), "identity\n5 -> 5\nw -> w");
    let out = stdout(&["embed", "w^2+w", "w^2", "w", "w^2+w"]);
    assert!(out.starts_with("inconclusive"));
    assert!(out.contains("SumWitness"));

    let v: Value = serde_json::from_str(&stdout(&["--json", "refute", "w^(w+1)", "w^(w+1)+1"])).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["certificate"]["kind"], "MaxPrincipalWitness");
    assert_eq!(v["certificate"]["m"], "w^w");
    let v: Value = serde_json::from_str(&stdout(&["--json", "refute", "w^w", "w^w+2"])).unwrap();
    assert_eq!(v["certificate"]["kind"], "ReachMarker");
    assert_eq!(stdout(&["refute", "w^w", "w^w+1"]), "none (w^w <_1 w^w+1)");
}

#[test]
fn sigma1_equality_pair() {
    let eq = stdout(&[
        "sigma1",
        "--file",
        &data("pair_eq_a.json"),
        "--file",
        &data("pair_eq_b.json"),
    ]);
    assert_eq!(
        eq,
        "iso: false\nformulas (bound 16): false\ncounterexample (true only in B): exists x0. (x0 != #0)"
    );
    let noeq = stdout(&[
        "sigma1",
        "--file",
        &data("pair_noeq_a.json"),
        "--file",
        &data("pair_noeq_b.json"),
        "--bound",
        "6",
    ]);
    assert_eq!(noeq, "iso: false\nformulas (bound 6): true");
    assert_eq!(run(&["sigma1", "--file", &data("pair_eq_a.json")]).2, 1);
    assert_eq!(run(&["sigma1", "--file", "missing.json", "--file", "x.json"]).2, 1);
}

#[test]
fn json_round_trips() {
    for args in [
        vec!["--json", "add", "e(0)", "w^(e(0)+1)"],
        vec!["--json", "mreach", "w^w^2"],
        vec!["--json", "tset", "e(1)", "e(1)*3+w"],
    ] {
        let v: Value = serde_json::from_str(&stdout(&args)).unwrap();
        let mut strings = Vec::new();
        collect(&v, &mut strings);
        for s in strings {
            if let Ok(x) = s.parse::<ordlab::Ordinal>() {
                assert_eq!(x.to_string(), s);
            }
        }
        assert_eq!(serde_json::from_str::<Value>(&v.to_string()).unwrap(), v);
    }
}

fn collect(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => out.push(s.clone()),
        Value::Array(xs) => xs.iter().for_each(|x| collect(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect(x, out)),
        _ => {}
    }
}

#[test]
fn corpus_and_selftest() {
    let a = stdout(&["corpus", "--count", "60", "--seed", "3"]);
    assert_eq!(a, stdout(&["corpus", "--count", "60", "--seed", "3"]));
    assert_eq!(a.lines().count(), 60);
    assert_ne!(a, stdout(&["corpus", "--count", "60", "--seed", "4"]));
    let p = stdout(&["corpus", "--count", "10", "--principals"]);
    assert!(p.lines().all(|l| l.parse::<ordlab::Ordinal>().unwrap().is_additive_principal()));

    let report = stdout(&["selftest", "--seed", "11"]);
    assert_eq!(report.lines().filter(|l| l.starts_with("pass")).count(), 9, "{report}");
    let v: Value = serde_json::from_str(&stdout(&["--json", "selftest", "--budget", "1"])).unwrap();
    assert!(v["suites"].as_array().unwrap().iter().all(|s| s["failed"] == 0));
}
