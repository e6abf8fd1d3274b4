use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_poset-ramsey"));
    for key in ["MAX_COLORINGS", "MAX_GROUND_SIZE", "MAX_DOMAIN", "JOBS", "SEED"] {
        cmd.env_remove(format!("POSET_RAMSEY_{key}"));
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &TempDir, name: &str, value: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path
}

fn chain(n: usize) -> Value {
    let pairs: Vec<[usize; 2]> = (0..n).flat_map(|a| (a + 1..n).map(move |b| [a, b])).collect();
    json!({ "p": 1, "size": n, "partial_order": pairs, "linear_orders": [(0..n).collect::<Vec<_>>()] })
}

struct Chains {
    _dir: TempDir,
    paths: Vec<PathBuf>,
}

impl Chains {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let paths = (0..=6).map(|n| write(&dir, &format!("chain{n}.json"), &chain(n))).collect();
        Chains { _dir: dir, paths }
    }

    fn get(&self, n: usize) -> &str {
        self.paths[n].to_str().unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn validate_reports_ok_and_round_trips() {
    let chains = Chains::new();
    let out = run(&["validate", "--input", chains.get(3)]);
    assert_eq!(code(&out), 0);
    let report = stdout_json(&out);
    assert_eq!(report["ok"], true);
    assert_eq!(report["comparable_pairs"], 3);

    let dir = TempDir::new().unwrap();
    let again = write(&dir, "again.json", &report["structure"]);
    let second = stdout_json(&run(&["validate", "--input", again.to_str().unwrap()]));
    assert_eq!(second["structure"], report["structure"]);
}

#[test]
fn hasse_input_is_closed() {
    let dir = TempDir::new().unwrap();
    let path = write(
        &dir,
        "hasse.json",
        &json!({ "p": 1, "size": 3, "partial_order": [[0, 1], [1, 2]], "linear_orders": [[0, 1, 2]], "hasse": true }),
    );
    let report = stdout_json(&run(&["validate", "--input", path.to_str().unwrap()]));
    assert_eq!(report["comparable_pairs"], 3);
}

#[test]
fn classical_ramsey_through_the_cli() {
    let chains = Chains::new();
    let holds = run(&["verify-witness", "--z", chains.get(6), "--x", chains.get(2), "--y", chains.get(3), "--d", "2"]);
    assert_eq!(code(&holds), 0);
    let cert = stdout_json(&holds);
    assert_eq!(cert["verdict"], "witness_holds");
    assert_eq!(cert["objects"], 15);
    assert_eq!(cert["targets"], 20);

    let fails = run(&["verify-witness", "--z", chains.get(5), "--x", chains.get(2), "--y", chains.get(3), "--d", "2"]);
    assert_eq!(code(&fails), 0, "a counterexample is still a successful answer");
    let cert = stdout_json(&fails);
    assert_eq!(cert["verdict"], "counterexample");
    assert_eq!(cert["coloring"].as_array().unwrap().len(), 10);
}

#[test]
fn parallel_runs_emit_identical_certificates() {
    let chains = Chains::new();
    let args = ["verify-witness", "--z", chains.get(5), "--x", chains.get(2), "--y", chains.get(3), "--d", "2"];
    let one = run(&args);
    let four = bin().args(args).args(["--jobs", "4"]).output().unwrap();
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&run(&["bogus"])), 1);
    assert_eq!(code(&run(&["verify-witness", "--d", "2"])), 1);
    assert_eq!(code(&run(&["validate", "--input", "/nonexistent/structure.json"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"p\": 1").unwrap();
    let out = run(&["validate", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed input"));

    let cyclic = write(
        &dir,
        "cyclic.json",
        &json!({ "p": 1, "size": 2, "partial_order": [[0, 1], [1, 0]], "linear_orders": [[0, 1]] }),
    );
    assert_eq!(code(&run(&["validate", "--input", cyclic.to_str().unwrap()])), 1);

    let chains = Chains::new();
    assert_eq!(code(&run(&["copies", "--x", chains.get(2), "--y", chains.get(3), "--format", "dot"])), 1);
}

#[test]
fn guard_refusals_exit_two() {
    let chains = Chains::new();
    let args = ["verify-witness", "--z", chains.get(6), "--x", chains.get(2), "--y", chains.get(3), "--d", "2"];
    assert_eq!(code(&run(&[&args[..], &["--max-domain", "3"]].concat())), 2);
    assert_eq!(code(&run(&[&args[..], &["--max-colorings", "5"]].concat())), 2);
    let env = bin().args(args).env("POSET_RAMSEY_MAX_COLORINGS", "5").output().unwrap();
    assert_eq!(code(&env), 2);
    assert_eq!(code(&run(&["grid", "--n", "9", "--m", "9", "--max-ground-size", "100"])), 2);
    assert_eq!(code(&run(&["search-product", "--d", "2", "--k", "1", "--l", "3", "--m", "1", "--n-max", "4"])), 2);
}

#[test]
fn bad_environment_is_a_usage_error() {
    let out = bin().args(["grid", "--n", "2", "--m", "1"]).env("POSET_RAMSEY_JOBS", "many").output().unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn rigid_surjection_listing_and_count() {
    let listed = stdout_json(&run(&["rigid-surjections", "--from", "3", "--to", "2"]));
    let maps: Vec<Value> = listed.as_array().unwrap().iter().map(|r| r["map"].clone()).collect();
    assert_eq!(maps, vec![json!([0, 0, 1]), json!([0, 1, 0]), json!([0, 1, 1])]);
    assert_eq!(listed[0]["source_anchor"], json!([0]));
    assert_eq!(listed[0]["target_anchor"], json!([0]));
    for (from, to, stirling) in [(4, 2, 7), (5, 3, 25), (6, 3, 90)] {
        let counted = stdout_json(&run(&["rigid-surjections", "--from", &from.to_string(), "--to", &to.to_string(), "--count"]));
        assert_eq!(counted["count"], stirling);
    }
}

#[test]
fn extensions_of_a_two_order_structure() {
    let dir = TempDir::new().unwrap();
    let v = write(
        &dir,
        "v.json",
        &json!({ "p": 2, "size": 3, "partial_order": [[0, 2]], "linear_orders": [[0, 1, 2], [1, 0, 2]] }),
    );
    let v = v.to_str().unwrap();
    let by_first = stdout_json(&run(&["extensions", "--input", v]));
    assert_eq!(by_first, json!([[0, 1, 2], [0, 2, 1], [1, 0, 2]]));
    let by_second = stdout_json(&run(&["extensions", "--input", v, "--of-order", "1"]));
    assert_eq!(by_second, json!([[1, 0, 2], [0, 1, 2], [0, 2, 1]]));
    assert_eq!(code(&run(&["extensions", "--input", v, "--of-order", "2"])), 1);
}

#[test]
fn copies_of_a_chain() {
    let chains = Chains::new();
    let out = stdout_json(&run(&["copies", "--x", chains.get(2), "--y", chains.get(4)]));
    assert_eq!(out["count"], 6);
}

#[test]
fn grid_formats() {
    let json = stdout_json(&run(&["grid", "--n", "2", "--m", "2", "--p", "2", "--anchors", "0,1"]));
    assert_eq!(json["n"], 2);
    assert_eq!(json["structure"]["size"], 4);
    assert_eq!(json["structure"]["linear_orders"].as_array().unwrap().len(), 2);
    let dot = run(&["grid", "--n", "2", "--m", "2", "--format", "dot"]);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.contains("(1,1)"));
    assert_eq!(code(&run(&["grid", "--n", "2", "--m", "2", "--anchors", "1"])), 1);
}

#[test]
fn product_and_dual_statements() {
    let found = stdout_json(&run(&["search-product", "--d", "2", "--k", "1", "--l", "2", "--m", "1"]));
    assert_eq!(found["n"], 3);
    assert_eq!(found["previous"]["verdict"], "counterexample");

    let cert = stdout_json(&run(&["verify-product", "--n", "6", "--d", "2", "--k", "2", "--l", "3", "--m", "1"]));
    assert_eq!(cert["verdict"], "witness_holds");

    let dual = run(&["search-dual", "--d", "2", "--a-len", "1", "--b-len", "1"]);
    assert_eq!(code(&dual), 0);
    assert_eq!(stdout_json(&dual)["m"], 1);

    let cert = stdout_json(&run(&["verify-dual", "--m", "2", "--d", "2", "--a-len", "1", "--b-len", "2"]));
    assert_eq!(cert["instance"]["kind"], "dual");

    let prop2 = stdout_json(&run(&[
        "verify-prop2", "--m", "1", "--n", "3", "--d", "2", "--a-len", "1", "--b-len", "1", "--k", "1", "--l", "2",
    ]));
    assert_eq!(prop2["verdict"], "witness_holds");
    assert_eq!(code(&run(&["verify-prop2", "--m", "1", "--d", "2", "--a-len", "1", "--b-len", "1", "--k", "1", "--l", "2"])), 1);
}

#[test]
fn prop5_and_interpretation_on_chains() {
    let chains = Chains::new();
    let (x, y) = (chains.get(2), chains.get(3));
    let prop5 = stdout_json(&run(&["verify-prop5", "--x", x, "--y", y, "--m", "1", "--n", "6", "--d", "2"]));
    assert_eq!(prop5["verdict"], "witness_holds");

    let report = stdout_json(&run(&["interpret-check", "--x", x, "--y", y, "--m", "1", "--n", "4"]));
    assert_eq!(report["holds"], true);
    assert!(report["interpretation"]["violation"].is_null());

    let with_transfer = stdout_json(&run(&["interpret-check", "--x", x, "--y", y, "--m", "1", "--n", "6", "--d", "2"]));
    assert_eq!(with_transfer["transfer"]["consistent"], true);
    assert_eq!(with_transfer["transfer"]["twisted"]["member"]["n"], 6);
}

#[test]
fn construction_and_minimal_search() {
    let chains = Chains::new();
    let built = stdout_json(&run(&["construct-witness", "--x", chains.get(2), "--y", chains.get(3), "--d", "1"]));
    assert_eq!(built["kind"], "grid");
    assert_eq!(built["verified"], true);

    let minimal = stdout_json(&run(&["search-minimal", "--x", chains.get(1), "--y", chains.get(2), "--d", "2", "--bound", "4"]));
    assert_eq!(minimal["size"], 3);
    let refused = run(&["search-minimal", "--x", chains.get(2), "--y", chains.get(3), "--d", "2", "--bound", "4"]);
    assert_eq!(code(&refused), 2);
}

#[test]
fn acceptance_subcommand_passes() {
    let out = run(&["acceptance", "--format", "table"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(code(&out), 0, "{text}");
    assert_eq!(text.lines().filter(|l| l.contains(" PASS ")).count(), 9);
}
