use hs_cli::model::ModelFile;
use hs_cli::parse::{parse_form, parse_scalar};
use hs_core::catalog;
use serde_json::Value;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};

fn hsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsys")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = hsys(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("hsys-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn h19_declared() -> BTreeSet<String> {
    ModelFile::from_entry(&catalog::h19minus(1)).declared()
}

#[test]
fn futaki_on_the_flat_torus_is_all_zero() {
    let v = json(&["futaki", "--catalog", "torus3"]);
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    for r in rows {
        assert_eq!(r["direct"], "0");
        assert_eq!(r["explicit"], "0");
    }
    assert_eq!(v["result"]["verdict"], "Unobstructed");
}

#[test]
fn sl2c_hull_strominger_residuals() {
    let v = json(&["check-hs", "--catalog", "sl2c-example"]);
    let eqs = v["result"]["equations"].as_array().unwrap();
    assert_eq!(eqs.len(), 4);
    for e in &eqs[..2] {
        assert_eq!(e["pass"], true, "{e}");
        assert_eq!(e["residual"], serde_json::json!({}));
    }
    assert_eq!(eqs[2]["residual"], "0");
    assert_eq!(eqs[3]["pass"], false);
}

#[test]
fn solve_bianchi_on_h19() {
    let v = json(&["solve-bianchi", "--catalog", "h19minus", "--alpha-negative", "--charges", "1"]);
    let r = &v["result"];
    assert_eq!(r["consistent"], true);
    assert_eq!(r["kernel_dim"], 7);
    let decl = h19_declared();
    let particular = parse_form(r["particular"].as_str().unwrap(), 3, &decl).unwrap();
    let expected = parse_form("-1/2*i*a*n1^2*pi^2*w3^~w3", 3, &decl).unwrap();
    assert_eq!(particular, expected);
}

#[test]
fn json_values_parse_back() {
    let v = json(&["solve-bianchi", "--catalog", "h19minus", "--charges", "2"]);
    let decl = ModelFile::from_entry(&catalog::h19minus(2)).declared();
    let r = &v["result"];
    for f in r["kernel"].as_array().unwrap().iter().chain([&r["rhs"], &r["particular"]]) {
        let text = f.as_str().unwrap();
        let parsed = parse_form(text, 3, &decl).unwrap();
        assert_eq!(parsed.to_string(), text);
    }
    for (_, c) in r["particular_coordinates"].as_object().unwrap() {
        let text = c.as_str().unwrap();
        assert_eq!(parse_scalar(text, &decl).unwrap().to_string(), text);
    }
}

#[test]
fn float_mode_annotates_exact_values() {
    let v = json(&["check-hs", "--catalog", "sl2c-example", "--float"]);
    let bianchi = &v["result"]["equations"][3]["residual"];
    assert_eq!(bianchi["zero_1e-9"], false);
    assert!(bianchi["exact"].as_str().is_some());
    let v = json(&["solve-bianchi", "--catalog", "h19minus", "--charges", "1", "--float"]);
    let c = &v["result"]["particular_coordinates"]["i*w3^~w3"];
    // samples a = -1, n1 = 1, pi = 3
    assert_eq!(c["exact"], "-1/2*a*n1^2*pi^2");
    assert!((c["float"][0].as_f64().unwrap() - 4.5).abs() < 1e-9);
}

#[test]
fn output_is_deterministic() {
    for cmd in ["endos", "futaki", "cohomology"] {
        let a = hsys(&[cmd, "--catalog", "h19minus", "--alpha-negative"]);
        let b = hsys(&[cmd, "--catalog", "h19minus", "--alpha-negative"]);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn jobs_do_not_change_task_output() {
    let mut file = ModelFile::from_entry(&catalog::h19minus(1));
    file.tasks = ["axioms", "cohomology", "solve-bianchi", "positivity", "endos"].map(String::from).to_vec();
    let p = temp_file("tasks.hs", &file.to_text());
    let p = p.to_str().unwrap();
    let seq = hsys(&["run", "--model", p, "--format", "json"]);
    let par = hsys(&["run", "--model", p, "--format", "json", "--jobs", "4"]);
    assert!(seq.status.success(), "{}", String::from_utf8_lossy(&seq.stderr));
    assert_eq!(seq.stdout, par.stdout);
    let v: Value = serde_json::from_slice(&seq.stdout).unwrap();
    let names: Vec<&str> = v["tasks"].as_array().unwrap().iter().map(|t| t["command"].as_str().unwrap()).collect();
    assert_eq!(names, ["axioms", "cohomology", "solve-bianchi", "positivity", "endos"]);
}

#[test]
fn set_substitutes_values() {
    let v = json(&["solve-bianchi", "--catalog", "h19minus", "--charges", "1", "--set", "n1=2", "--set", "a=-1"]);
    assert_eq!(v["result"]["particular"], "2*i*pi^2*w3^~w3");
}

#[test]
fn input_errors_exit_with_2() {
    let bad = temp_file("bad.hs", "[algebra]\ndim = 3\nd w1 = w1\n");
    let out = hsys(&["axioms", "--model", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line 3, column 8"), "{msg}");
    assert_eq!(hsys(&["nope", "--catalog", "torus3"]).status.code(), Some(2));
    assert_eq!(hsys(&["axioms", "--catalog", "nowhere"]).status.code(), Some(2));
    assert_eq!(hsys(&["axioms", "--catalog", "torus3", "--assume", "zz>0"]).status.code(), Some(2));
}

#[test]
fn engine_errors_exit_with_3() {
    let mut file = ModelFile::from_entry(&catalog::h19minus(1));
    file.reference.set(0, 2, hs_exact::Scalar::ratio(1, 2));
    file.reference.set(2, 0, hs_exact::Scalar::ratio(1, 2));
    let p = temp_file("unbalanced.hs", &file.to_text());
    let out = hsys(&["futaki", "--model", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn catalog_entry_prints_as_a_model_file() {
    let out = hsys(&["catalog", "--catalog", "torus3-paired"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, ModelFile::from_entry(&catalog::torus3_paired()).to_text());
    let list = json(&["catalog"]);
    assert_eq!(list["result"].as_array().unwrap().len(), catalog::NAMES.len());
}
