use std::path::PathBuf;

use linkrank::cli::{run, Outcome, EXIT_INPUT, EXIT_OK, EXIT_UNNATURAL};
use linkrank::{parse_crossings, Block};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn linkrank(args: &[&str]) -> Outcome {
    run(std::iter::once("linkrank").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.stderr, "", "unexpected stderr");
    serde_json::from_str(&out.stdout).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_owned())
        .collect()
}

#[test]
fn rank_geometric_mean_report() {
    let out = linkrank(&["rank", "--input", &fixture("pcm.csv"), "--method", "gm", "--json"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    let expected = [1.587401, 1.650964, 0.381571];
    for (w, e) in v["weights"].as_array().unwrap().iter().zip(expected) {
        assert!((w["weight"].as_f64().unwrap() - e).abs() < 1e-6);
    }
    assert_eq!(strings(&v["ranking"]), ["2", "1", "3"]);
    assert_eq!(v["naturality"], Value::Bool(false));
    assert_eq!(v["violations"], serde_json::json!([["2", "1"]]));
    assert_eq!(v["condorcet_winner"], "1");
    assert_eq!(v["condorcet_loser"], "3");
    for key in ["pareto", "dominating_pairs", "preferences", "splittable", "diagram"] {
        assert!(v.get(key).unwrap().is_null(), "{key}");
    }
}

#[test]
fn rank_check_naturality_exit_code() {
    let out = linkrank(&["rank", "--input", &fixture("pcm.csv"), "--check-naturality"]);
    assert_eq!(out.code, EXIT_UNNATURAL);
    assert!(out.stdout.contains("ranking: 2 > 1 > 3"));
    assert!(out.stdout.contains("violations: (2, 1)"));

    // a consistent matrix ranks along its own transitive tournament
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    std::fs::write(&path, "1,2,4\n1/2,1,2\n1/4,1/2,1\n").unwrap();
    let out = linkrank(&["rank", "--input", path.to_str().unwrap(), "--check-naturality"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
}

#[test]
fn rank_eigenvector_method() {
    let out = linkrank(&["rank", "--input", &fixture("pcm.json"), "--method", "ev", "--json"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["method"], "ev");
    assert_eq!(strings(&v["ranking"]), ["2", "1", "3"]);
    let sum: f64 = v["weights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| w["weight"].as_f64().unwrap())
        .sum();
    assert!((sum - 1.0).abs() < 1e-12);

    let out = linkrank(&["rank", "--input", &fixture("pcm.json"), "--method", "ev", "--max-iter", "1", "--tol", "0"]);
    assert_eq!(out.code, linkrank::cli::EXIT_INTERNAL);
    assert!(out.stderr.contains("did not converge"));
}

#[test]
fn rank_writes_comparison_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("rank.svg");
    let out = linkrank(&["rank", "--input", &fixture("pcm.csv"), "--diagram", svg_path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    let crossings = parse_crossings(&svg).unwrap();
    assert_eq!(crossings.len(), 6);
    // right block is the ranking 2 > 1 > 3
    let right: Vec<_> = crossings
        .iter()
        .filter(|c| c.block == Block::Right)
        .map(|c| (c.over.to_string(), c.under.to_string()))
        .collect();
    for pair in [("2", "1"), ("2", "3"), ("1", "3")] {
        assert!(right.contains(&(pair.0.into(), pair.1.into())), "{pair:?}");
    }
}

#[test]
fn natural_rank_from_matrix_and_tournament() {
    let out = linkrank(&["natural-rank", "--input", &fixture("pcm.csv"), "--json"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(strings(&v["ranking"]), ["1", "2", "3"]);
    assert_eq!(v["naturality"], Value::Bool(true));
    assert_eq!(v["violations"], serde_json::json!([]));

    let out = linkrank(&["natural-rank", "--input", &fixture("cycle.json")]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("ranking: 3 > 2 > 1"));
    assert!(out.stdout.contains("condorcet winner: none"));
}

#[test]
fn game_report_and_diagram() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("pd.svg");
    let out = linkrank(&["game", "--input", &fixture("pd.json"), "--diagram", svg_path.to_str().unwrap(), "--json"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    assert_eq!(strings(&v["pareto"]), ["CS", "SC", "SS"]);
    assert_eq!(v["dominating_pairs"], serde_json::json!([["SS", "CC"]]));
    assert_eq!(strings(&v["preferences"][0]["order"]), ["CS", "SS", "CC", "SC"]);
    assert_eq!(strings(&v["preferences"][1]["order"]), ["SC", "SS", "CC", "CS"]);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(parse_crossings(&svg).unwrap().len(), 12);

    let text = linkrank(&["game", "--input", &fixture("pd.json")]);
    assert!(text.stdout.contains("pareto optimal: CS, SC, SS"));
    assert!(text.stdout.contains("dominating pairs: (SS, CC)"));
}

#[test]
fn split_queries() {
    let (l, r) = (fixture("cycle.json"), fixture("total_231.json"));
    let out = linkrank(&["split", "--left", &l, "--right", &r, "--pair", "1", "2", "--json"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(json(&out)["splittable"][0]["splittable"], Value::Bool(true));
    let out = linkrank(&["split", "--left", &l, "--right", &r, "--loop", "3"]);
    assert_eq!(out.stdout, "3: linked\n");
    let out = linkrank(&["split", "--left", &l, "--right", &r]);
    assert_eq!(out.stdout, "1 / 2: splittable\n1 / 3: linked\n2 / 3: linked\n");
    let out = linkrank(&["split", "--left", &l, "--right", &r, "--pair", "1", "1"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = linkrank(&["split", "--left", &l, "--right", &fixture("pd.json")]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn render_to_stdout_and_file() {
    let (l, r) = (fixture("cycle.json"), fixture("total_231.json"));
    let out = linkrank(&["render", "--left", &l, "--right", &r]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("<?xml"));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.svg");
    let out = linkrank(&["render", "--left", &l, "--right", &r, "--output", path.to_str().unwrap(), "--strand-gap", "10"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(std::fs::read_to_string(&path).unwrap().contains(r#"r="5""#));
    let out = linkrank(&["render", "--left", &l, "--right", &r, "--strand-gap", "1"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("strand_gap"));
}

#[test]
fn validation_errors_name_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "1,1\n1,1\n").unwrap();
    let out = linkrank(&["rank", "--input", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("tied comparison"), "{}", out.stderr);
    std::fs::write(&path, "1,2\n3,1\n").unwrap();
    let out = linkrank(&["rank", "--input", path.to_str().unwrap()]);
    assert!(out.stderr.contains("reciprocity"), "{}", out.stderr);
    let game = dir.path().join("tied.json");
    std::fs::write(&game, r#"{"players":["A","B"],"strategies":{"A":["x","y"],"B":["z"]},"orientation":"utility","outcomes":{"A":[[1],[1]],"B":[[1],[2]]}}"#).unwrap();
    let out = linkrank(&["game", "--input", game.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("equal outcomes"), "{}", out.stderr);
}

#[test]
fn invocations_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    for verb in [["rank", "--input", &fixture("pcm.csv")], ["natural-rank", "--input", &fixture("pcm.csv")]] {
        let first = linkrank(&[verb[0], verb[1], verb[2], "--json", "--diagram", a.to_str().unwrap()]);
        let second = linkrank(&[verb[0], verb[1], verb[2], "--json", "--diagram", b.to_str().unwrap()]);
        assert_eq!(first.code, second.code);
        // reports differ only in the diagram path
        assert_eq!(
            first.stdout.replace(a.to_str().unwrap(), "X"),
            second.stdout.replace(b.to_str().unwrap(), "X")
        );
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let first = linkrank(&["game", "--input", &fixture("pd.json"), "--json"]);
    assert_eq!(first, linkrank(&["game", "--input", &fixture("pd.json"), "--json"]));
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_linkrank"))
        .args(["rank", "--input", &fixture("pcm.csv"), "--check-naturality"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stdout).contains("natural: no"));
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_linkrank"))
        .args(["natural-rank", "--input", "/does/not/exist.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
