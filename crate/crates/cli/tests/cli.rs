use std::process::{Command, Output};

fn qha(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qha"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_ok(args: &[&str]) -> String {
    let o = qha(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn classify_examples() {
    assert_eq!(run_ok(&["classify", "A3"]).trim(), "Dynkin A3, h=4");
    assert_eq!(run_ok(&["classify", "A1"]).trim(), "Dynkin A1, h=2");
    assert_eq!(run_ok(&["classify", "kronecker"]).trim(), "Extended Dynkin Ã1");
}

#[test]
fn quiver_files() {
    let dir = std::env::temp_dir().join(format!("qha-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = dir.join("a3.txt");
    std::fs::write(&text, "# A3\nvertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n").unwrap();
    let out = qha(&["classify", text.to_str().unwrap()]);
    let json = dir.join("kr.json");
    std::fs::write(
        &json,
        r#"{"vertices":[1,2],"arrows":[{"name":"a","tail":1,"head":2},{"name":"b","tail":1,"head":2}]}"#,
    )
    .unwrap();
    let out_json = qha(&["classify", json.to_str().unwrap()]);
    let cyclic = dir.join("cyc.txt");
    std::fs::write(&cyclic, "vertices: 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\n").unwrap();
    let out_cyc = qha(&["classify", cyclic.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(stdout(&out).trim(), "Dynkin A3, h=4", "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out_json).trim(), "Extended Dynkin Ã1", "{}", String::from_utf8_lossy(&out_json.stderr));
    assert_eq!(out_cyc.status.code(), Some(2));
}

#[test]
fn indecs_totals() {
    let out = run_ok(&["indecs", "A3"]);
    assert_eq!(out.lines().filter(|l| l.starts_with('(')).count(), 6);
    assert!(out.contains("sum dim 10"));
    assert!(out.contains("sum dim^2 20"));
    let not_dynkin = qha(&["indecs", "kronecker"]);
    assert_eq!(not_dynkin.status.code(), Some(2));
}

#[test]
fn ladders() {
    let out = run_ok(&["ladder", "A3", "2"]);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("L0 = {(2,0)}"));
    assert!(lines[1].starts_with("L1 = {(1,1), (3,0)}"));
    assert!(lines[2].starts_with("L2 = {(2,1)}"));
    assert!(lines[3].starts_with("L3 = {}"));
    let a1 = run_ok(&["ladder", "A1", "1"]);
    assert!(a1.lines().nth(1).unwrap().starts_with("L1 = {}"));
    let hat = run_ok(&["ladder", "hatA2", "1", "4"]);
    assert_eq!(hat.matches("closed form agrees").count(), 5);
    let json = run_ok(&["ladder", "kronecker", "1", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["ladder"][1]["summands"][0]["mult"], 2);
}

#[test]
fn arq_dot() {
    let out = run_ok(&["arq", "A3"]);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 6);
}

#[test]
fn weights() {
    assert_eq!(run_ok(&["regular", "A3", "v=1,1,1"]).trim(), "Regular");
    assert_eq!(run_ok(&["regular", "A3", "--weight", "3,-1,-1"]).trim(), "Regular");
    assert!(run_ok(&["regular", "A3", "v=1,-1,1"]).starts_with("NotRegular"));
    let forms = run_ok(&["regular", "A3"]);
    assert_eq!(forms.lines().count(), 7);
    let ew = run_ok(&["eigenweight", "A4"]);
    assert!(ew.contains("Q(zeta_5)") && ew.contains("verified") && ew.contains("Regular"));
    let short = run_ok(&["eigenweight", "A4", "--shortcut"]);
    assert!(short.contains("v = (z^3, z^2, z, 1)"));
    assert!(short.contains("nonzero: true"));
    let kr = run_ok(&["eigenweight", "kronecker"]);
    assert!(kr.contains("v = C^-1 delta = (-1, 1)"));
}

#[test]
fn vm_flags_vanishing() {
    let o = qha(&["--field", "Q(zeta_4)", "vm", "z", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("V_4 = 0"));
    let ok = run_ok(&["vm", "2", "5"]);
    assert!(ok.contains("V_5 = 31"));
}

#[test]
fn zero_examples() {
    assert_eq!(run_ok(&["zero", "A3", "v=3,-1,-1", "wrho2(2)"]).trim(), "ZERO");
    assert_eq!(run_ok(&["zero", "A3", "v=1,1,1", "wrho2(2)"]).trim(), "NONZERO");
    assert_eq!(run_ok(&["zero", "A3", "rho(2)"]).trim(), "ZERO");
    assert_eq!(run_ok(&["zero", "A3", "-a1'.a1"]).trim(), "NONZERO");
    let bad = qha(&["zero", "A3", "a1 + a2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn verify_scoreboard() {
    let out = run_ok(&["verify", "A3", "v=1,1,1"]);
    assert!(out.contains("total 20"));
    assert!(out.trim_end().ends_with("ALL OK"));
    let out = run_ok(&["--no-trust-bound", "verify", "A2", "v=1,2"]);
    assert!(out.contains("length band 3: dim 0: ok"));
    let bad = qha(&["--no-trust-bound", "verify", "A2", "v=1,-1"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAILED"));
}

#[test]
fn dims_outputs_are_deterministic() {
    let a = run_ok(&["dims", "A3", "v=1,1,1", "--format", "json"]);
    let b = run_ok(&["dims", "A3", "v=1,1,1", "--format", "json"]);
    assert_eq!(a, b);
    let single = Command::new(env!("CARGO_BIN_EXE_qha"))
        .args(["dims", "A3", "v=1,1,1", "--format", "json"])
        .env("QHA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&single), a);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["total"], 20);
    let csv = run_ok(&["dims", "A3", "--format", "csv"]);
    assert!(csv.starts_with("i,j,l,s,dim\n"));
    let total: u64 = csv.lines().skip(1).map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 10);
    let fp = run_ok(&["--field", "Fp(101)", "dims", "A3", "--format", "csv"]);
    assert_eq!(fp, csv);
}

#[test]
fn exit_codes() {
    assert_eq!(qha(&["classify", "no-such-quiver"]).status.code(), Some(2));
    assert_eq!(qha(&["--field", "Fp(100)", "classify", "A3"]).status.code(), Some(2));
    assert_eq!(qha(&["regular", "A3", "v=1,1"]).status.code(), Some(2));
    assert_eq!(qha(&["zero", "A3", "v=1,0,1", "a1"]).status.code(), Some(2));
    let capped = qha(&["dims", "A3", "v=1,1,1", "--cap-cell-size", "1"]);
    assert_eq!(capped.status.code(), Some(3));
    assert_eq!(qha(&["dims", "kronecker"]).status.code(), Some(2));
}

#[test]
fn coxeter_report() {
    let out = run_ok(&["coxeter", "A2"]);
    assert!(out.contains("char poly of Psi: t^2 + t + 1"));
    assert!(out.contains("Phi^3 = I: true"));
    let c = run_ok(&["cartan", "A3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&c).unwrap();
    assert_eq!(v["cartan"][0], serde_json::json!([1, 1, 1]));
}
