use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinor10")).args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_whole_variety_over_f2() {
    let o = run(&["count", "--field", "2", "--k", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2295\n");
}

#[test]
fn classify_pure_kappa_is_singular_hyperplane() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let scene = r#"{
  "schema": "spinor10-scene/1",
  "field": {"kind": "prime", "p": 5},
  "seed": 0,
  "objects": [
    {"type": "spinor", "name": "kappa", "half": "minus",
     "coords": [1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0]}
  ]
}"#;
    std::fs::write(&path, scene).unwrap();
    let o = run(&["classify", "--scene", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "singular-hyperplane\n");
}

#[test]
fn verify_motive_passes() {
    let o = run(&["verify", "motive", "--field", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS motive"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["count", "--field", "6", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nonexistent"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["member", "--spinor", "e1+e12"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--scene", "/nonexistent/scene.json"]).status.code(), Some(2));
    assert_eq!(run(&["corank-does-not-exist"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "corank", "--field", "2"]).status.code(), Some(2));
}

#[test]
fn member_and_gamma() {
    let o = run(&["member", "--field", "5", "--spinor", "e1+e234"]);
    assert_eq!(stdout(&o), "not pure\n");
    let o = run(&["member", "--field", "5", "--spinor", "e12345"]);
    assert_eq!(stdout(&o), "pure\n");
    let o = run(&["gamma", "--field", "5", "--spinor", "e1+e234", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let g: Vec<u64> = v["gamma"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    // isotropic
    let q: u64 = (0..5).map(|i| g[i] * g[i + 5]).sum();
    assert_eq!(q % 5, 0);
    assert!(g.iter().any(|&x| x != 0));
}

#[test]
fn make_section_round_trip_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let p = path.to_str().unwrap();
    let o = run(&["make-section", "--kind", "special", "--field", "3", "--seed", "9", "--out", p]);
    assert_eq!(stdout(&o), "special\n");
    assert_eq!(stdout(&run(&["classify", "--scene", p])), "special\n");
    assert_eq!(stdout(&run(&["rho", "--scene", p])), "rho 0\nrank 0\n");
    let f4 = stdout(&run(&["f4", "--scene", p]));
    assert_ne!(f4.lines().next(), Some("0"));
    let a = stdout(&run(&["make-section", "--kind", "generic", "--k", "3", "--field", "3", "--seed", "2", "--workers", "1"]));
    let b = stdout(&run(&["make-section", "--kind", "generic", "--k", "3", "--field", "3", "--seed", "2"]));
    assert_eq!(a, b);
    assert!(a.contains("spinor10-scene/1"));
}

#[test]
fn report_csv_header() {
    let o = run(&["report", "--field", "2", "--k-max", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("q,m,k,side,actual,predicted,pass"));
    assert_eq!(lines.next(), Some("2,1,0,x,2295,2295,true"));
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn span_kernel_of_isotropic_three_space_is_a_line() {
    let o = run(&["span", "--of", "kernel", "--half", "minus", "--field", "3", "--vector", "e1", "--vector", "e2", "--vector", "e3"]);
    assert!(stdout(&o).starts_with("dim 2\n"));
}
