use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn chamanara(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chamanara"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    fs::read_to_string(path).unwrap()
}

const W1: &str = "L=(1,0);R=(1,0)";
const H01: &str = "L=(1,1,0,0);R=(0,1,1,0)";

#[test]
fn act_h_fixes_the_w1_vector() {
    let out = chamanara(&["act", "--group", "Z2", "--vector", W1, "--word", "H"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), format!("{W1}\n"));
}

#[test]
fn act_moves_a_single_entry_and_back() {
    let out = chamanara(&[
        "act",
        "--group",
        "Z2",
        "--vector",
        "L=(0);R=1|(0)",
        "--word",
        "H",
    ]);
    assert_eq!(stdout(&out), "L=(0);R=0,1|(0)\n");
    let out = chamanara(&[
        "act",
        "--group",
        "Z2",
        "--vector",
        "L=(0);R=0,1|(0)",
        "--word",
        "H^-1",
    ]);
    assert_eq!(stdout(&out), "L=(0);R=1|(0)\n");
}

#[test]
fn act_json_reports_the_matrix() {
    let out = chamanara(&[
        "act", "--group", "Z2", "--vector", W1, "--word", "-I,P1,P2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["vector"], W1);
    assert_eq!(v["matrix"], "[[2,0],[0,1/2]]");
}

#[test]
fn index_of_single_entry_is_infinite() {
    let out = chamanara(&["index", "--group", "Z2", "--vector", "L=(0);R=1|(0)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "infinite\n");
}

#[test]
fn index_examples() {
    for (vector, expected) in [(W1, "1\n"), (H01, "2\n")] {
        let out = chamanara(&["index", "--group", "Z2", "--vector", vector]);
        assert_eq!(stdout(&out), expected);
    }
    let out = chamanara(&[
        "index",
        "--group",
        "Z3",
        "--vector",
        "L=(1,0,2);R=(2,0,1)",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["finite"], true);
    assert_eq!(v["index"], 4);
    assert_eq!(v["rank"], 5);
}

#[test]
fn counts_json_for_n5() {
    let out = chamanara(&["counts", "--n", "5", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "{\"wn_star\":30,\"fixed_p1\":7,\"fixed_p2\":7,\"fixed_both\":1,\"striezel_wn\":7}\n"
    );
}

#[test]
fn orbit_dot_matches_golden_files() {
    for (vector, file) in [(W1, "w1.dot"), (H01, "w2_star.dot")] {
        let out = chamanara(&[
            "orbit", "--group", "Z2", "--vector", vector, "--format", "dot",
        ]);
        assert!(out.status.success());
        assert_eq!(stdout(&out), golden(file), "{file}");
        let again = chamanara(&[
            "orbit", "--group", "Z2", "--vector", vector, "--format", "dot",
        ]);
        assert_eq!(out.stdout, again.stdout);
    }
}

#[test]
fn orbit_json_report() {
    let out = chamanara(&[
        "orbit", "--group", "Z2", "--vector", H01, "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["order"], 2);
    assert_eq!(v["complete"], true);
    assert_eq!(v["type"], "striezel");
    assert_eq!(v["p1_edges"], serde_json::json!([1, 0]));
    assert_eq!(v["p2_edges"], serde_json::json!([0, 1]));
    assert_eq!(v["vertices"][0], H01);
}

#[test]
fn orbit_cap_without_finite_verdict_reports_infinite() {
    let out = chamanara(&[
        "orbit",
        "--group",
        "Z2",
        "--vector",
        "L=(0);R=1|(0)",
        "--cap",
        "50",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("index infinite"));
}

#[test]
fn orbit_cap_with_finite_verdict_is_undecided() {
    let out = chamanara(&[
        "orbit",
        "--group",
        "Z3",
        "--vector",
        "L=(1,0,2);R=(2,0,1)",
        "--cap",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("undecided"));
}

#[test]
fn parse_errors_exit_with_1() {
    for args in [
        vec!["index", "--group", "Z1", "--vector", W1],
        vec!["index", "--group", "Z2", "--vector", "L=(0);R=|()"],
        vec!["index", "--group", "Z2", "--vector", "L=(0);R=(0)"],
        vec!["act", "--group", "Z2", "--vector", W1, "--word", "P3"],
        vec!["counts", "--n", "5", "--format", "dot"],
        vec!["frobnicate"],
        vec!["counts"],
    ] {
        let out = chamanara(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!stderr(&out).is_empty());
    }
}

#[test]
fn wn_listing_and_census() {
    let out = chamanara(&["wn", "--n", "2"]);
    assert_eq!(stdout(&out), "10\n01\n11\n");
    let out = chamanara(&["wn", "--n", "3", "--star", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 3);
    assert_eq!(v["wn_star"], 6);
    assert_eq!(v["striezel"], 2);
    assert_eq!(v["kranz"], 0);
    assert_eq!(
        v["orbits"][0]["members"],
        serde_json::json!(["001", "011", "111"])
    );
    assert_eq!(v["orbits"][0]["type"], "striezel");
}

#[test]
fn topology_and_construct_ends() {
    let out = chamanara(&["topology", "--group", "Z2", "--vector", "L=(0);R=1,1|(0)"]);
    let text = stdout(&out);
    assert!(text.starts_with("ends 2\n"), "{text}");
    assert!(text.contains("surface jacobs-ladder"));
    let out = chamanara(&["construct-ends", "--group", "Z2xZ2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["ends"], 4);
}

#[test]
fn realize_rank_gives_the_w2_star_vector() {
    let out = chamanara(&["realize-rank", "--n", "3"]);
    assert_eq!(stdout(&out), format!("{H01}\n"));
    let out = chamanara(&["realize-rank", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cache_hits_are_byte_identical_and_corrupt_entries_are_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = [
        "orbit", "--group", "Z2", "--vector", H01, "--cache", cache, "--format", "dot",
    ];

    let fresh = chamanara(&args);
    assert!(fresh.status.success());
    let entries: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    assert_eq!(entries.len(), 1);

    let cached = chamanara(&args);
    assert_eq!(cached.stdout, fresh.stdout);
    assert!(stderr(&cached).is_empty());

    // the equivalent text form reuses the same entry
    let text = chamanara(&["orbit", "--group", "Z2", "--vector", H01, "--cache", cache]);
    assert!(stdout(&text).contains("index 2"));

    fs::write(&entries[0], "{ not json").unwrap();
    let recovered = chamanara(&args);
    assert!(recovered.status.success());
    assert_eq!(recovered.stdout, fresh.stdout);
    assert!(stderr(&recovered).contains("warning"));
    // the entry was rewritten
    let again = chamanara(&args);
    assert!(stderr(&again).is_empty());
}

#[test]
fn cache_is_off_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_chamanara"))
        .current_dir(dir.path())
        .args(["orbit", "--group", "Z2", "--vector", H01])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}
