use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cyclo::CycScalar;
use mcginv::bundle::Bundle;
use mcginv::examples::drinfeld_double_cyclic;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mcginv"));
    c.env_remove("MCGINV_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn gen(dir: &Path, k: usize) -> PathBuf {
    let p = dir.join(format!("d_z{k}.json"));
    let o = run(&["gen-example", "--family", "double-cyclic", "--k", &k.to_string(), "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn eval_prints_one_for_lambda_of_lambda() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let o = run(&["eval", "--algebra", s(&a), "--expr", "lambda . Lambda"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("1"));
}

#[test]
fn mcg_check_passes_and_reports_every_generator() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let r = d.path().join("r.json");
    let o = run(&["mcg-check", "--algebra", s(&a), "--g", "1", "--n", "1", "--report", s(&r)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = report(&r);
    assert_eq!(v["status"], "pass");
    let gens = v["generators"].as_array().unwrap();
    let labels: Vec<_> = gens.iter().map(|g| g["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["R_1", "S_1", "b_1", "d_1"]);
    for g in gens {
        for key in ["label", "indices", "status", "max-entry-deviation", "wall-time"] {
            assert!(g.get(key).is_some(), "{key} missing");
        }
        assert_eq!(g["max-entry-deviation"], "0");
    }
    assert_eq!(v["config"]["command"], "mcg-check");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn reports_are_byte_identical() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let (r1, r2) = (d.path().join("1.json"), d.path().join("2.json"));
    for r in [&r1, &r2] {
        let o = run(&["mcg-check", "--algebra", s(&a), "--g", "2", "--n", "1", "--report", s(r)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());
}

#[test]
fn corrupted_product_names_associativity() {
    let d = TempDir::new().unwrap();
    let mut b = Bundle::from_example(&drinfeld_double_cyclic(2).unwrap());
    b.product[0].3 += &CycScalar::int(1);
    let p = d.path().join("corrupted.json");
    std::fs::write(&p, b.to_json_string()).unwrap();
    let o = run(&["verify-hopf", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL: associativity"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("associativity"));
}

#[test]
fn io_and_format_errors_exit_two() {
    let d = TempDir::new().unwrap();
    assert_eq!(run(&["verify-hopf", "/nonexistent/bundle.json"]).status.code(), Some(2));
    let junk = d.path().join("junk.json");
    std::fs::write(&junk, "{\"name\": 3}").unwrap();
    assert_eq!(run(&["derive", "--algebra", s(&junk)]).status.code(), Some(2));
    let a = gen(d.path(), 2);
    assert_eq!(run(&["eval", "--algebra", s(&a), "--expr", "lambda . . m"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "--algebra", s(&a), "--expr", "nosuchmap"]).status.code(), Some(2));
    assert_eq!(run(&["hom", "--algebra", s(&a), "--src", "G", "--dst", "F"]).status.code(), Some(2));
}

#[test]
fn verification_commands_pass_on_examples() {
    let d = TempDir::new().unwrap();
    for k in [2, 3] {
        let a = gen(d.path(), k);
        for cmd in ["derive", "identity-suite", "build-f", "sl2z"] {
            let o = run(&[cmd, "--algebra", s(&a)]);
            assert_eq!(o.status.code(), Some(0), "{cmd} on D(Z/{k}): {}", stdout(&o));
        }
        let o = run(&["verify-hopf", "--algebra", s(&a)]);
        assert_eq!(o.status.code(), Some(0));
    }
}

#[test]
fn sl2z_reports_both_scalars() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let r = d.path().join("r.json");
    let o = run(&["sl2z", "--algebra", s(&a), "--report", s(&r)]);
    assert_eq!(o.status.code(), Some(0));
    let v = report(&r);
    assert!(!v["results"]["c1"].is_null());
    assert!(!v["results"]["c2"].is_null());
}

#[test]
fn hom_dimensions() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let r = d.path().join("r.json");
    let o = run(&["hom", "--algebra", s(&a), "--src", "1", "--dst", "F * F^v", "--report", s(&r)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(report(&r)["results"]["dimension"].as_u64().unwrap() >= 1);
    let o = run(&["hom", "--algebra", s(&a), "--src", "K", "--dst", "F", "--report", s(&r)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(report(&r)["results"]["dimension"].as_u64().unwrap() > 1);
}

#[test]
fn twisted_runs_with_an_automorphism_file() {
    let d = TempDir::new().unwrap();
    let a = d.path().join("d_z3.json");
    let w = d.path().join("inv.json");
    let o = run(&["gen-example", "--k", "3", "--out", s(&a), "--omega-a", "2", "--omega-out", s(&w)]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["build-f", "--algebra", s(&a), "--omega", s(&w)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    for n in ["0", "1"] {
        let o = run(&["mcg-check", "--algebra", s(&a), "--g", "1", "--n", n, "--omega", s(&w)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("Cor^ω = Cor∘(id⊗(ω^-1)*)^g"));
    }
}

#[test]
fn correlator_writes_its_matrix() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let m = d.path().join("cor.json");
    let o = run(&["correlator", "--algebra", s(&a), "--g", "1", "--n", "1", "--out", s(&m)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let cor: linmap::LinMap = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!((cor.rows(), cor.cols()), (4, 16));
    let o = run(&["correlator", "--algebra", s(&a), "--g", "1", "--p", "1", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn pq_and_both_signs() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let r = d.path().join("r.json");
    let o = run(&["mcg-check", "--algebra", s(&a), "--g", "1", "--p", "1", "--q", "1", "--both-signs", "--report", s(&r)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v = report(&r);
    let gens = v["generators"].as_array().unwrap();
    assert!(gens.iter().any(|g| g["label"].as_str().unwrap().starts_with("flipped sign: ")));
    assert!(gens.iter().any(|g| g["label"] == "t_1,1"));
}

#[test]
fn budget_env_and_sampling_flag() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let count = |o: &Output| stdout(o).lines().filter(|l| l.starts_with("  ") && l.contains(" ms ")).count();
    let full = run(&["mcg-check", "--algebra", s(&a), "--g", "2", "--n", "2"]);
    let env = bin().args(["mcg-check", "--algebra", s(&a), "--g", "2", "--n", "2"]).env("MCGINV_BUDGET", "10").output().unwrap();
    let flag = run(&["mcg-check", "--algebra", s(&a), "--g", "2", "--n", "2", "--sample-tjk", "--samples", "1"]);
    for o in [&full, &env, &flag] {
        assert_eq!(o.status.code(), Some(0), "{}", stdout(o));
    }
    assert!(count(&env) < count(&full));
    assert!(count(&flag) < count(&env));
    assert!(stdout(&env).contains("budget: t and e generators sampled"));
}

#[test]
fn genus_zero_without_legs_passes() {
    let d = TempDir::new().unwrap();
    let a = gen(d.path(), 2);
    let o = run(&["mcg-check", "--algebra", s(&a), "--g", "0", "--n", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
