use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn triad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triad"))
        .args(args)
        .env_remove("TRIAD_MAX_DOMAIN")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const GIVING: &str = r#"{"name":"G","domain":["a","b","c"],"arity":3,
  "tuples":[["a","b","c"],["b","c","a"],["a","c","c"]]}"#;

#[test]
fn eval_projects_teridentity() {
    let dir = tempfile::tempdir().unwrap();
    let d2 = write(dir.path(), "d2.json", r#"["a","b"]"#);
    let out = triad(&["eval", "--domain", &d2, "--formula", "exists z. I3(x,y,z)"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["arity"], 2);
    assert_eq!(v["tuples"], serde_json::json!([["a", "a"], ["b", "b"]]));
}

#[test]
fn eval_monad_on_inline_domain() {
    let v = json(&triad(&["eval", "--domain", "a,b", "--formula", "I1(x)"]));
    assert_eq!(v["tuples"], serde_json::json!([["a"], ["b"]]));
}

#[test]
fn giving_reduction_round_trips_through_eval() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", GIVING);
    let out = triad(&["reduce", "pairing", "--rel", &g]);
    assert!(out.status.success());
    let red = json(&out);
    assert_eq!(red["verify"]["equal"], true);
    assert_eq!(red["ternarity"], 1);
    let mut args = vec!["eval".to_string(), "--domain".into()];
    args.push(write(dir.path(), "ext.json", &red["domain"].to_string()));
    for (k, p) in red["predicates"].as_array().unwrap().iter().enumerate() {
        args.push("--rel".into());
        args.push(write(dir.path(), &format!("p{k}.json"), &p.to_string()));
    }
    args.extend([
        "--formula".into(),
        red["formula"].as_str().unwrap().into(),
        "--vars".into(),
        "x1,x2,x3".into(),
    ]);
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    let back = json(&triad(&argv));
    let mut tuples: Vec<Vec<String>> = serde_json::from_value(back["tuples"].clone()).unwrap();
    tuples.retain(|t| t.iter().all(|e| ["a", "b", "c"].contains(&e.as_str())));
    assert_eq!(
        tuples,
        vec![vec!["a", "b", "c"], vec!["a", "c", "c"], vec!["b", "c", "a"]]
    );
}

#[test]
fn degeneracy_places_are_one_based() {
    let dir = tempfile::tempdir().unwrap();
    let r = write(
        dir.path(),
        "r.json",
        r#"{"name":"R","domain":["a","b"],"arity":3,"tuples":[["a","a","b"],["a","b","b"]]}"#,
    );
    let v = json(&triad(&["analyze", "degeneracy", "--rel", &r]));
    assert_eq!(v["degenerate"], true);
    let places: Vec<Value> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["places"].clone())
        .collect();
    assert_eq!(
        places,
        vec![
            serde_json::json!([1]),
            serde_json::json!([2]),
            serde_json::json!([3])
        ]
    );
}

#[test]
fn search_exhaustion_exits_two() {
    let out = triad(&[
        "analyze",
        "search",
        "--name",
        "I3",
        "--fragment",
        "positive",
        "--max-atoms",
        "3",
        "--max-vars",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["outcome"], "exhausted");
    let found = triad(&["analyze", "search", "--name", "I2"]);
    assert_eq!(found.status.code(), Some(0));
    assert_eq!(json(&found)["outcome"], "reduced");
}

#[test]
fn search_domain_cap_comes_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_triad"))
        .args(["analyze", "search", "--name", "I3", "--domain", "a,b,c"])
        .env("TRIAD_MAX_DOMAIN", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn demos_report_ternarity() {
    let sell = triad(&["demo", "sell"]);
    assert!(sell.status.success());
    let v = json(&sell);
    assert_eq!(v["ternarity"], 2);
    assert_eq!(v["verify"]["equal"], true);
    assert!(v["formula"].as_str().unwrap().contains("S_1(x1,x3,e)"));
    let give = json(&triad(&["demo", "give"]));
    assert_eq!(give["ternarity"], 1);
}

#[test]
fn render_cartesian_sum() {
    let out = triad(&["render", "--formula", "P(x)|Q(y)|R(z)"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches("cluster_cut").count(), 4);
    assert_eq!(dot.matches("shape=circle").count(), 3);
}

#[test]
fn usage_and_parse_errors_exit_one() {
    assert_eq!(triad(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(triad(&["eval", "--formula", "P(x"]).status.code(), Some(1));
    assert_eq!(triad(&["eval", "--formula", "Unbound(x)"]).status.code(), Some(1));
}

#[test]
fn pdf_of_disconnected_formula() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        dir.path(),
        "p.json",
        r#"{"name":"P","domain":["a","b"],"arity":1,"tuples":[["a"]]}"#,
    );
    let q = write(
        dir.path(),
        "q.json",
        r#"{"name":"Q","domain":["a","b"],"arity":2,"tuples":[["a","b"]]}"#,
    );
    let out = triad(&[
        "reduce",
        "pdf",
        "--rel",
        &p,
        "--rel",
        &q,
        "--formula",
        "~(P(x) & Q(y,z))",
        "--blocks",
        "x|y,z",
    ]);
    assert!(out.status.success());
    assert_eq!(json(&out)["equal"], true);
}

#[test]
fn single_criterion_verify() {
    let out = triad(&["verify", "--criterion", "9"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["results"][0]["passed"], true);
}
