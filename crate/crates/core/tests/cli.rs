use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use coloriso::colouring::{read_csv_path, write_csv_path, EdgeColouring};
use coloriso::plant::{plant_kst_sub, plant_pair};
use coloriso::trees::{power, RootedTree};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coloriso"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).to_string_lossy().into_owned()
}

fn summary(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    let line =
        text.lines().last().unwrap_or_else(|| panic!("no output; stderr: {}", String::from_utf8_lossy(&out.stderr)));
    serde_json::from_str(line).unwrap()
}

fn save(dir: &TempDir, name: &str, c: &EdgeColouring) -> String {
    let p = dir.path().join(name);
    write_csv_path(c, &p).unwrap();
    p.to_string_lossy().into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_files_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = run(&["construct", "--a", "1", "--b", "2", "--q", "5", "--seed", "1", "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let v = summary(&o);
        assert!(v["palette_size"].as_u64().unwrap() <= 25);
        assert_eq!(v["n"], 25);
        assert_eq!(v["proper_after_vizing"], true);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let stats: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("a.csv.stats.json")).unwrap()).unwrap();
    for key in ["n", "q", "a", "b", "d", "seed", "palette_size", "boundedness_C", "proper_after_vizing"] {
        assert!(stats.get(key).is_some(), "missing {key}");
    }
    assert_eq!(read_csv_path(&a).unwrap().n(), 25);
}

#[test]
fn construct_rejects_composite_modulus() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("c.csv");
    let o = run(&["construct", "--a", "1", "--b", "2", "--q", "6", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid field"));
    assert!(!out.exists());
}

#[test]
fn verify_rainbow() {
    let dir = TempDir::new().unwrap();
    let path = save(&dir, "rainbow.csv", &EdgeColouring::rainbow(8));
    let o = run(&["verify", "--colouring", &path]);
    assert_eq!(o.status.code(), Some(0));
    let v = summary(&o);
    assert_eq!(v["is_proper"], true);
    assert_eq!(v["boundedness_C"], 1);
    assert_eq!(v["max_rooted_collection"], 0);
    assert_eq!(v["certified_k0"], 1);
}

#[test]
fn verify_planted_power_pair_emits_checked_witness() {
    let dir = TempDir::new().unwrap();
    let t = RootedTree::path_rooted_at_ends(2).unwrap();
    let h = power(&t, 2).unwrap().graph;
    let p = plant_pair(14, &h, 4, 10).unwrap();
    let path = save(&dir, "planted.csv", &p.colouring);
    let cert = dir.path().join("cert.json");
    let o = run(&[
        "verify",
        "--colouring",
        &path,
        "--tree",
        &fixture("p2_rooted_ends.json"),
        "--k0",
        "2",
        "--out",
        s(&cert),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["witness_verified"], true);
    assert_eq!(v["certified_k0"], Value::Null);
    let m1: Vec<usize> = serde_json::from_value(v["witness"]["map1"].clone()).unwrap();
    let m2: Vec<usize> = serde_json::from_value(v["witness"]["map2"].clone()).unwrap();
    let c = read_csv_path(Path::new(&path)).unwrap();
    assert!(m1.iter().all(|x| !m2.contains(x)));
    for &(u, w) in h.edges() {
        assert_eq!(c.colour(m1[u], m1[w]), c.colour(m2[u], m2[w]));
    }
}

#[test]
fn verify_reports_line_of_truncated_csv() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("cut.csv");
    fs::write(&path, "u,v,colour\n0,1,0\n0,2,1\n1,2,").unwrap();
    let o = run(&["verify", "--colouring", s(&path)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 4"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn constraint_fixtures_and_trials() {
    for (name, k) in [("paths_disjoint.json", 10), ("paths_overlapping.json", 9)] {
        let o = run(&["constraint", "--system", &fixture(name)]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(summary(&o)["k"], k);
    }
    let o = run(&[
        "constraint",
        "--tree",
        &fixture("path5_rooted_ends.json"),
        "--p",
        "3",
        "--trials",
        "300",
        "--seed",
        "2",
        "--host",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(summary(&o)["violations"], 0);
    assert_eq!(run(&["constraint"]).status.code(), Some(2));
}

#[test]
fn lower_outcomes_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let rainbow = save(&dir, "rainbow.csv", &EdgeColouring::rainbow(20));
    let o = run(&["lower", "--colouring", &rainbow, "--s", "2", "--t", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v = summary(&o);
    assert_eq!(v["outcome"], "not_found");
    assert_eq!(v["aux_edges"], 0);

    let tiny = save(&dir, "tiny.csv", &EdgeColouring::rainbow(10));
    let o = run(&["lower", "--colouring", &tiny, "--s", "2", "--t", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(summary(&o)["reason"].as_str().unwrap().contains("threshold"));

    let p = plant_kst_sub(32, 2, 2, 9, 40).unwrap();
    let planted = save(&dir, "planted.csv", &p.colouring);
    let ord = dir.path().join("ordering.json");
    fs::write(&ord, serde_json::to_string(&p.ordering.unwrap()).unwrap()).unwrap();
    let diag = dir.path().join("diag.json");
    let o = run(&["lower", "--colouring", &planted, "--s", "2", "--t", "2", "--ordering", s(&ord), "--out", s(&diag)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_str(&fs::read_to_string(&diag).unwrap()).unwrap();
    assert_eq!(v["outcome"], "found");
    assert!(v["witness"]["map1"].is_array());

    let o = run(&["lower", "--colouring", &planted, "--s", "3", "--t", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_table() {
    let o = run(&["oracle", "--n", "4,5", "--pattern", "K2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "n,pattern,f2\n4,K2,6\n5,K2,10\n");
    let o = run(&["oracle", "--n", "7", "--pattern", "K2"]);
    assert_eq!(o.status.code(), Some(2));
}
