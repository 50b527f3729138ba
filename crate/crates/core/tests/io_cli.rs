mod common;

use std::path::Path;
use std::process::{Command, Output};

use orient::io::{export_tree, load_tree, LabeledTree, TreeFormat};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn orient(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orient"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

/// a, b, c, d sit close together; e is far away and joins the root.
fn toy(dir: &Path) {
    write(dir, "toy.txt", "a 0 0\nb 0 1\nc 1 0\nd 2 0\ne 100 100\n");
    write(dir, "truth.tsv", "b\ta\nc\td\n");
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn build_then_eval_matches_hand_count() {
    let d = TempDir::new().unwrap();
    toy(d.path());
    let out = orient(d.path(), &["build", "--embedding", "toy.txt", "--p", "1", "--out", "t.tsv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let tsv = std::fs::read_to_string(d.path().join("t.tsv")).unwrap();
    assert_eq!(
        tsv.lines().map(|l| l.split('\t').take(2).collect::<Vec<_>>().join(">")).collect::<Vec<_>>(),
        ["a>__ROOT__", "b>a", "c>a", "d>c", "e>__ROOT__"]
    );
    let r = json(&orient(d.path(), &["eval-edges", "--tree", "t.tsv", "--truth", "truth.tsv"]));
    let report = &r["report"];
    assert_eq!(report["hits"]["edges"], 3);
    assert_eq!(report["hits"]["directed"], 1);
    assert_eq!(report["hits"]["reversed"], 1);
    assert_eq!(report["hits"]["undirected"], 2);
}

#[test]
fn usage_and_data_errors() {
    let d = TempDir::new().unwrap();
    toy(d.path());
    let out = orient(d.path(), &["build", "--embedding", "toy.txt"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
    assert_eq!(orient(d.path(), &["build", "--embedding", "toy.txt", "--order", "sideways", "--out", "x.json"]).status.code(), Some(1));
    assert_eq!(orient(d.path(), &["build", "--embedding", "missing.txt", "--out", "x.json"]).status.code(), Some(2));
    write(d.path(), "bad.txt", "a 1 2\nb 1\n");
    let out = orient(d.path(), &["build", "--embedding", "bad.txt", "--out", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2:"));
    assert_eq!(orient(d.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn sweep_row_equals_build_plus_eval() {
    let d = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut emb = String::new();
    let mut truth = String::new();
    for i in 0..60 {
        emb.push_str(&format!("w{i}"));
        for _ in 0..4 {
            emb.push_str(&format!(" {:.6}", rand::Rng::random_range(&mut rng, -1.0..1.0)));
        }
        emb.push('\n');
        if i > 0 {
            truth.push_str(&format!("w{i}\tw{}\n", rand::Rng::random_range(&mut rng, 0..i)));
        }
    }
    write(d.path(), "emb.txt", &emb);
    write(d.path(), "truth.tsv", &truth);

    let out = orient(d.path(), &["sweep", "--embedding", "emb.txt", "--truth", "truth.tsv", "--p-grid", "0.3,0.7", "--orders", "asc"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    let row = rows.iter().find(|r| &r[1] == "0.7").unwrap();

    assert!(orient(d.path(), &["build", "--embedding", "emb.txt", "--p", "0.7", "--order", "asc", "--out", "t.json"]).status.success());
    let r = json(&orient(d.path(), &["eval-edges", "--tree", "t.json", "--truth", "truth.tsv"]));
    assert_eq!(row[3].parse::<f64>().unwrap(), r["report"]["directed_acc"].as_f64().unwrap());
    assert_eq!(row[5].parse::<f64>().unwrap(), r["report"]["undirected_acc"].as_f64().unwrap());
}

#[test]
fn eval_lca_and_cut_run() {
    let d = TempDir::new().unwrap();
    toy(d.path());
    write(d.path(), "lch.tsv", "b\tc\ta\nd\tc\tc\n");
    assert!(orient(d.path(), &["build", "--embedding", "toy.txt", "--p", "1", "--out", "t.json"]).status.success());
    let r = json(&orient(
        d.path(),
        &["eval-lca", "--tree", "t.json", "--embedding", "toy.txt", "--lch", "lch.tsv", "--pairs", "200", "--knn", "2", "--closure", "0"],
    ));
    let rate = r["hit_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));
    let out = orient(d.path(), &["cut", "--tree", "t.json", "--percentile", "50", "--out", "c.json"]);
    assert!(out.status.success());
    let c: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("c.json")).unwrap()).unwrap();
    let members: usize = c["clusters"].as_array().unwrap().iter().map(|c| c["members"].as_array().unwrap().len()).sum();
    assert_eq!(members, 5);
}

#[test]
fn power_diagnostics_are_written() {
    let d = TempDir::new().unwrap();
    toy(d.path());
    let out = orient(d.path(), &["power", "--embedding", "toy.txt", "--power", "degree", "--truth", "truth.tsv", "--out", "p.csv", "--diagnostics", "diag", "--window", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["norm_rank.csv", "power_rank.csv", "hypernym_rank_scatter.csv"] {
        assert!(d.path().join("diag").join(f).exists(), "{f}");
    }
    let p = std::fs::read_to_string(d.path().join("p.csv")).unwrap();
    assert!(p.starts_with("rank,label,power\n0,a,"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn export_load_round_trip(seed in 0u64..10_000, n in 1usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = common::random_tree(n, &mut rng);
        let labels: Vec<String> = (0..n).map(|i| format!("w{i}_{seed}")).collect();
        let lt = LabeledTree::new(labels, tree).unwrap();
        let dir = TempDir::new().unwrap();
        let json = dir.path().join("t.json");
        export_tree(&lt, &json, TreeFormat::Json).unwrap();
        prop_assert_eq!(&load_tree(&json).unwrap(), &lt);
        let tsv = dir.path().join("t.tsv");
        export_tree(&lt, &tsv, TreeFormat::Tsv).unwrap();
        let back = load_tree(&tsv).unwrap();
        prop_assert_eq!(back.parent_labels(), lt.parent_labels());
    }
}
