use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    root.join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_channel-space"))
        .args(args)
        .env_remove("CHANNEL_SPACE_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

#[test]
fn order_prints_the_tied_example() {
    let r = json(&["order", &fixture("tied_matrix.json")]);
    assert_eq!(r["weak_order_matrix"], serde_json::json!([[1, 3, 2], [1, 1, 3], [2, 2, 1]]));
    assert_eq!(r["row_stochastic"], false);
    assert_eq!(r["columns"][0]["dimension"], 2);
    assert_eq!(r["columns"][0]["stable"], false);
    assert_eq!(r["stable"], false);
}

#[test]
fn order_of_the_cyclic_channel() {
    for file in ["cyclic_p.json", "cyclic_p.csv"] {
        let r = json(&["order", &fixture(file)]);
        let ranks: Vec<Value> = (0..3).map(|j| r["columns"][j]["ranks"].clone()).collect();
        assert_eq!(ranks, vec![serde_json::json!([1, 2, 3]), serde_json::json!([3, 1, 2]), serde_json::json!([2, 3, 1])]);
        assert_eq!(r["stable"], true);
        assert_eq!(r["row_stochastic"], true);
    }
}

#[test]
fn constant_column_is_one_dimensional_and_unstable() {
    let r = json(&["order", &fixture("constant_column.json")]);
    assert_eq!(r["columns"][0]["dimension"], 1);
    assert_eq!(r["columns"][0]["stable"], false);
}

#[test]
fn epsilon_ties_merge_close_entries() {
    let r = json(&["order", &fixture("tied_matrix.json"), "--tie-rule", "epsilon", "--epsilon", "1"]);
    assert_eq!(r["columns"][0]["ranks"], serde_json::json!([1, 1, 1]));
    assert_eq!(code(&["order", &fixture("cyclic_p.json"), "--tie-rule", "epsilon"]), 3);
}

#[test]
fn dist_perm_examples() {
    let same = json(&["dist-perm", "2,3,1", "2,3,1"]);
    assert_eq!(same["agreements"], 7);
    assert_eq!(same["distance"], "0/1");

    let rev = json(&["dist-perm", "1,2,3", "3,2,1", "--oracle"]);
    assert_eq!(rev["agreements"], 3);
    assert_eq!(rev["oracle_agreements"], 3);
    assert_eq!(rev["distance"], "4/7");
    assert_eq!(rev["kendall_tau"], 3);

    let swap = json(&["dist-perm", "1,2", "2,1", "--oracle"]);
    assert_eq!(swap["agreements"], 2);
    assert_eq!(swap["distance"], "1/3");
    assert_eq!(swap["kendall_tau"], 1);
}

#[test]
fn dist_perm_echoes_both_forms() {
    let r = json(&["dist-perm", "3,1,2", "1,2,3"]);
    assert_eq!(r["sigma"]["perm"], serde_json::json!([3, 1, 2]));
    assert_eq!(r["sigma"]["inverse"], serde_json::json!([2, 3, 1]));
    assert_eq!(r["convention"], "rank1=most-likely");
}

#[test]
fn dist_perm_errors() {
    assert_eq!(code(&["dist-perm", "1,2,3", "2,1"]), 1);
    assert_eq!(code(&["dist-perm", "1,1,3", "1,2,3"]), 3);
    assert_eq!(code(&["dist-perm", "a,b", "1,2"]), 3);
    assert_eq!(code(&["dist-perm", "1,2,3"]), 3);
}

#[test]
fn dist_channel_orders_the_worked_triple() {
    let q = json(&["dist-channel", &fixture("cyclic_p.json"), &fixture("variant_q.json"), "--oracle", "--global"]);
    let r = json(&["dist-channel", &fixture("cyclic_p.json"), &fixture("variant_r.json"), "--oracle"]);
    assert_eq!(q["per_column_s"], serde_json::json!([7, 7, 6]));
    assert_eq!(r["per_column_s"], serde_json::json!([5, 7, 7]));
    assert_eq!(q["distance"], "1/21");
    assert_eq!(r["distance"], "2/21");
    assert_eq!(q["oracle_probability"], "20/21");
    assert_eq!(q["global_distance"], "1/7");
    assert_eq!(q["column_norms"], serde_json::json!(["1/1", "1/1", "1/1"]));
}

#[test]
fn dist_channel_same_channel_is_zero() {
    let r = json(&["dist-channel", &fixture("cyclic_p.json"), &fixture("cyclic_p.csv")]);
    assert_eq!(r["distance"], "0/1");
    assert_eq!(r["probability"], "1/1");
}

#[test]
fn dist_channel_with_explicit_prior() {
    let r = json(&[
        "dist-channel",
        &fixture("cyclic_p.json"),
        &fixture("variant_q.json"),
        "--prior",
        "1/2,1/4,1/4",
        "--oracle",
    ]);
    assert_eq!(r["distance"], "5/112");
    assert_eq!(r["prior"], "1/2,1/4,1/4");
    assert_eq!(code(&["dist-channel", &fixture("cyclic_p.json"), &fixture("variant_q.json"), "--prior", "1/2,1/2,1/2"]), 1);
}

#[test]
fn dist_channel_domain_errors() {
    let p = fixture("cyclic_p.json");
    let out = run(&["dist-channel", &p, &fixture("constant_column.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension mismatch"));
    let out = run(&["dist-channel", &p, &fixture("tied_channel.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 1"));
    assert_eq!(code(&["dist-channel", &p, &fixture("tied_matrix.json")]), 1);
}

#[test]
fn bad_files_are_parse_errors() {
    let dir = TempDir::new().unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{\"n\": 2, \"m\": 2, \"entries\": [[\"1/2\", \"x\"], [1, 0]]}").unwrap();
    let negative = dir.path().join("negative.csv");
    std::fs::write(&negative, "1.5,-0.5\n0,1\n").unwrap();
    let p = garbled.to_string_lossy();
    assert_eq!(code(&["order", &p]), 3);
    assert_eq!(code(&["order", &dir.path().join("missing.json").to_string_lossy()]), 3);
    let out = run(&["order", &negative.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1, column 2"));
}

#[test]
fn row_sum_tolerance_and_normalization() {
    let dir = TempDir::new().unwrap();
    let loose = dir.path().join("loose.csv");
    std::fs::write(&loose, "0.6,0.3\n0.2,0.8\n").unwrap();
    let tight = dir.path().join("tight.csv");
    std::fs::write(&tight, "0.7,0.3\n0.2,0.8\n").unwrap();
    let (l, t) = (loose.to_string_lossy(), tight.to_string_lossy());
    assert_eq!(code(&["dist-channel", &l, &t]), 1);
    assert_eq!(code(&["dist-channel", &l, &t, "--tolerance", "0.1"]), 0);
    let r = json(&["dist-channel", &l, &t, "--normalize"]);
    assert_eq!(r["distance"], "0/1");
}

#[test]
fn cones_census() {
    let three = json(&["cones", "3"]);
    assert_eq!(three["total"], 13);
    assert_eq!(
        three["by_dimension"],
        serde_json::json!([{"dimension": 3, "count": 6}, {"dimension": 2, "count": 6}, {"dimension": 1, "count": 1}])
    );
    assert_eq!(three["weak_orders"].as_array().unwrap().len(), 13);
    let two = json(&["cones", "2", "--summary"]);
    assert_eq!(two["total"], 3);
    assert!(two.get("weak_orders").is_none());
    let four = json(&["cones", "4", "--summary"]);
    assert_eq!(four["total"], 75);
    assert_eq!(four["fubini"], "75");
    assert_eq!(four["by_dimension"][0], serde_json::json!({"dimension": 4, "count": 24}));
    assert_eq!(code(&["cones", "7"]), 1);
}

#[test]
fn verify_example6_flags_published_values() {
    let r = json(&["verify", "--suite", "example6"]);
    assert_eq!(r["passed"], true);
    let details = &r["checks"][0]["details"];
    assert_eq!(details["radial"][0]["published_per_column_s"], serde_json::json!([7, 7, 4]));
    assert_eq!(details["radial"][0]["oracle_per_column_s"], serde_json::json!([7, 7, 6]));
    assert_eq!(details["radial"][0]["discrepancy"], true);
    let table = run(&["verify", "--suite", "example6", "--format", "table"]);
    assert!(String::from_utf8_lossy(&table.stdout).contains("5/21"));
}

#[test]
fn verify_is_deterministic_and_seeded_from_env() {
    let args = ["verify", "--suite", "formula-oracle,equivalence,triangle", "--exhaustive-n", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let seeded = Command::new(env!("CARGO_BIN_EXE_channel-space"))
        .args(args)
        .env("CHANNEL_SPACE_SEED", "99")
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&seeded.stdout).unwrap();
    assert_eq!(report["seed"], 99);
    assert_eq!(report["checks"][2]["informational"], true);
}

#[test]
fn verify_failures_exit_with_two() {
    // One sample per pair cannot land within four (zero) standard errors.
    let out = run(&["verify", "--suite", "monte-carlo", "--mc-samples", "1", "--mc-pairs", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(code(&["verify", "--suite", "no-such-check"]), 3);
    assert_eq!(code(&["verify", "--exhaustive-n", "9"]), 1);
}

#[test]
fn simulate_is_reproducible_across_worker_counts() {
    let p = fixture("cyclic_p.json");
    let q = fixture("variant_r.json");
    let base = ["simulate", &p, &q, "--samples", "40000", "--seed", "5"];
    let one = run(&[&base[..], &["--workers", "1"]].concat());
    let four = run(&[&base[..], &["--workers", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let r: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(r["closed_form"], "19/21");
    assert!(r["deviation_in_se"].as_f64().unwrap().abs() <= 4.0);
    assert_eq!(r["rng"], "chacha8-stream-per-chunk-16384");
    assert_eq!(code(&["simulate", &p, &q, "--samples", "0"]), 1);
}

#[test]
fn table_format_renders() {
    let out = run(&["dist-channel", &fixture("cyclic_p.json"), &fixture("variant_q.json"), "--format", "table"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("distance     1/21"), "{text}");
    let out = run(&["order", &fixture("tied_matrix.json"), "--format", "table"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("row-stochastic: false"));
}
