use std::fs;
use std::path::{Path, PathBuf};

use krc_cli::formats::{parse_graph, write_cwe, write_graph};
use krc_cli::run;
use krc_core::generators::{gen_random_instance, mark_random_irrelevant};
use krc_core::oracle::{brute_force_decide, brute_force_min_radius, DEFAULT_LIMIT};
use krc_core::witness::{eval_cw_expression, path_expression};
use serde_json::Value;
use tempfile::TempDir;

const P3: &str = "p krc 3 2 undirected\na 1 2 1\na 2 3 1\n";

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> String {
    p.display().to_string()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(all);
    let v: Value = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {out:?}"));
    assert_eq!(v["exit_code"], out.code);
    (v, out.code)
}

#[test]
fn brute_force_on_p3() {
    let dir = TempDir::new().unwrap();
    let g = s(&put(&dir, "p3.grw", P3));
    let (v, code) = json(&["solve", "--algo", "bf", "--graph", &g, "-k", "1", "-r", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["centers"], serde_json::json!([2]));
    assert_eq!(v["certified_radius"], 1);
    let text = run(["solve", "--algo", "bf", "--graph", &g, "-k", "1", "-r", "0"]);
    assert_eq!(text.code, 1);
    assert!(text.stdout.contains("answer: NO"));
}

#[test]
fn verify_reports_uncovered() {
    let dir = TempDir::new().unwrap();
    let g = s(&put(&dir, "p3.grw", P3));
    let (v, code) = json(&["verify", "--graph", &g, "--centers", "1", "-r", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["details"]["uncovered"][0]["vertex"], 3);
    assert_eq!(json(&["verify", "--graph", &g, "--centers", "2", "-r", "1"]).1, 0);
}

#[test]
fn approx_cw_within_bound() {
    let dir = TempDir::new().unwrap();
    let e = path_expression(&[20, 20]);
    let opt = brute_force_min_radius(&eval_cw_expression(&e).unwrap(), 1, DEFAULT_LIMIT).unwrap();
    assert_eq!(opt, Some(20));
    let f = s(&put(&dir, "e.cwe", &write_cwe(&e)));
    let (v, code) = json(&["approx", "--algo", "cw", "--cwe", &f, "-k", "1", "-r", "20", "--eps", "1/2"]);
    assert_eq!(code, 0);
    assert!(v["certified_radius"].as_u64().unwrap() <= 30);
    let bad = run(["approx", "--algo", "cw", "--cwe", &f, "-k", "1", "-r", "20", "--eps", "0.5"]);
    assert_eq!(bad.code, 2);
}

#[test]
fn every_exact_algorithm_agrees_with_the_oracle() {
    let dir = TempDir::new().unwrap();
    for seed in 0..6 {
        let mut g = gen_random_instance(7, 9, 1, seed).unwrap();
        if seed % 2 == 1 {
            mark_random_irrelevant(&mut g, 0.3, seed);
        }
        let f = s(&put(&dir, &format!("g{seed}.grw"), &write_graph(&g)));
        for (k, r) in [(1, 2), (2, 1), (2, 2)] {
            let want = brute_force_decide(&g, k, r, DEFAULT_LIMIT).unwrap().is_some();
            for algo in ["bf", "tw", "vc", "td"] {
                if algo == "vc" && g.has_irrelevant() {
                    continue;
                }
                let (v, code) =
                    json(&["solve", "--algo", algo, "--graph", &f, "-k", &k.to_string(), "-r", &r.to_string()]);
                assert_eq!(code, if want { 0 } else { 1 }, "{algo} seed {seed} k {k} r {r}: {v}");
            }
        }
    }
}

#[test]
fn count_matches_oracle_count() {
    let dir = TempDir::new().unwrap();
    let f = s(&put(&dir, "e.cwe", &write_cwe(&path_expression(&[1, 1, 1]))));
    let (a, ca) = json(&["count", "--cwe", &f, "-k", "4", "-r", "1"]);
    let (b, cb) = json(&["oracle", "count", "--cwe", &f, "-k", "4", "-r", "1"]);
    assert_eq!((ca, cb), (0, 0));
    let counts = a["result"]["counts"].as_array().unwrap();
    assert_eq!(counts[..], b["result"]["counts"].as_array().unwrap()[..counts.len()]);
    let (c, _) = json(&["solve", "--algo", "cw", "--cwe", &f, "-k", "2", "-r", "1"]);
    assert_eq!(c["result"]["decision"], true);
}

#[test]
fn errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let g = s(&put(&dir, "p3.grw", P3));
    let (v, code) = json(&["solve", "--algo", "cw", "--graph", &g, "-k", "1", "-r", "1"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("--cwe"));
    assert_eq!(run(["solve", "--algo", "bf", "--graph", &g, "-k", "1", "-r", "1", "--frobnicate"]).code, 2);
    let broken = s(&put(&dir, "bad.grw", "p krc 2 1 undirected\na 1 2 0\n"));
    let out = run(["solve", "--algo", "bf", "--graph", &broken, "-k", "1", "-r", "1"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 2"), "{}", out.stderr);
    assert_eq!(run(["verify", "--graph", "/nonexistent.grw", "--centers", "1", "-r", "1"]).code, 2);
    assert_eq!(run(["--help"]).code, 0);
}

#[test]
fn json_is_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let g = gen_random_instance(10, 14, 3, 5).unwrap();
    let f = s(&put(&dir, "g.grw", &write_graph(&g)));
    let args = ["--json", "approx", "--algo", "tw", "--graph", &f, "-k", "2", "-r", "4", "--eps", "1/2"];
    let a = run(args);
    let b = run(args);
    assert_eq!(a, b);
    let t = run(["--json", "--timing", "solve", "--algo", "tw", "--graph", &f, "-k", "2", "-r", "4"]);
    let v: Value = serde_json::from_str(&t.stdout).unwrap();
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn generators_write_graph_and_sidecar() {
    let dir = TempDir::new().unwrap();
    let cnf = s(&put(&dir, "f.cnf", "p cnf 2 1\n1 2 0\n"));
    let out = dir.path().join("seth.grw");
    let (_, code) = json(&["gen", "seth-cw", "--cnf", &cnf, "-r", "1", "--out", &s(&out)]);
    assert_eq!(code, 0);
    let side: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("seth.json")).unwrap()).unwrap();
    assert_eq!((side["k"].as_u64(), side["gamma"].as_u64(), side["columns"].as_u64()), (Some(29), Some(2), Some(4)));
    let witness: Vec<String> = side["witness"].as_array().unwrap().iter().map(|x| x.to_string()).collect();
    assert_eq!(witness.len(), 29);
    let (_, code) = json(&["verify", "--graph", &s(&out), "--centers", &witness.join(","), "-r", "1"]);
    assert_eq!(code, 0);

    let src = s(&put(&dir, "mis.grw", "p krc 4 1 undirected\na 1 3 1\n"));
    for kind in ["mis-vc", "mis-fvs"] {
        let o = dir.path().join(format!("{kind}.grw"));
        let (_, code) = json(&["gen", kind, "--graph", &src, "--parts", "1,2;3,4", "--out", &s(&o)]);
        assert_eq!(code, 0);
        let g = parse_graph(&fs::read_to_string(&o).unwrap()).unwrap();
        assert_eq!(g.is_unit_weight(), kind == "mis-fvs");
    }

    let sat = s(&put(&dir, "one.cnf", "p cnf 1 1\n1 0\n"));
    let o = dir.path().join("sat.grw");
    assert_eq!(json(&["gen", "sat-td", "--cnf", &sat, "--out", &s(&o)]).1, 0);
    let o = dir.path().join("rand.grw");
    let (v, code) = json(&["gen", "random", "-n", "9", "-m", "12", "--seed", "3", "--with-td", "--out", &s(&o)]);
    assert_eq!(code, 0);
    assert_eq!(v["instance"]["m"], 12);
    let td = s(&dir.path().join("rand.td"));
    let (_, code) = json(&["solve", "--algo", "tw", "--graph", &s(&o), "--td", &td, "-k", "3", "-r", "2"]);
    assert!(code == 0 || code == 1);
    let o = dir.path().join("e.cwe");
    assert_eq!(json(&["gen", "random-cwe", "-n", "5", "--seed", "1", "--out", &s(&o)]).1, 0);
    let o = dir.path().join("r.cnf");
    assert_eq!(json(&["gen", "random-cnf", "--vars", "4", "--clauses", "3", "--out", &s(&o)]).1, 0);
    let (v, _) = json(&["oracle", "sat", "--cnf", &s(&o)]);
    assert!(v["result"]["decision"].is_boolean());
}

#[test]
fn oracles_and_bench() {
    let dir = TempDir::new().unwrap();
    let g = s(&put(&dir, "p3.grw", P3));
    let (v, code) = json(&["oracle", "min-radius", "--graph", &g, "-k", "1"]);
    assert_eq!((code, v["result"]["radius"].as_u64()), (0, Some(1)));
    let src = s(&put(&dir, "mis.grw", "p krc 4 2 undirected\na 1 3 1\na 2 4 1\n"));
    let (v, code) = json(&["oracle", "mis", "--graph", &src, "--parts", "1,2;3,4"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["selection"], serde_json::json!([1, 4]));
    let (v, code) = json(&["bench", "--sizes", "6,8", "--seeds", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["details"]["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let g = s(&put(&dir, "p3.grw", P3));
    let status = |args: &[&str]| {
        std::process::Command::new(env!("CARGO_BIN_EXE_krc")).args(args).output().unwrap().status.code()
    };
    assert_eq!(status(&["solve", "--algo", "bf", "--graph", &g, "-k", "1", "-r", "1"]), Some(0));
    assert_eq!(status(&["verify", "--graph", &g, "--centers", "1", "-r", "1"]), Some(1));
    assert_eq!(status(&["solve", "--algo", "nope", "--graph", &g, "-k", "1", "-r", "1"]), Some(2));
}
