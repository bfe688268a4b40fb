use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("powops").chain(args.iter().copied());
    let code = powops::cli::run(argv.map(std::ffi::OsString::from), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn binary_selftest_passes() {
    let out = Command::new(env!("CARGO_BIN_EXE_powops")).arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 12);
}

#[test]
fn bad_psi_reports_witness() {
    let (code, out, _) = run(&["theta", "check", "--file", &data("bad_psi.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("witness x"), "{out}");
    let (code, _, _) = run(&["theta", "check", "--file", &data("good_psi.json")]);
    assert_eq!(code, 0);
}

#[test]
fn gcd_table() {
    let (code, out, _) = run(&["weights", "gcd", "--max", "100"]);
    assert_eq!(code, 0);
    let rows: Vec<_> = out.lines().skip(1).filter(|l| !l.starts_with("verdict")).collect();
    assert_eq!(rows.len(), 99);
    assert!(rows.contains(&"64\t2"));
    assert!(rows.contains(&"81\t3"));
    assert!(rows.contains(&"100\t1"));
}

#[test]
fn certify_divisible_case() {
    let (code, out, _) = run(&["weights", "certify", "--m", "6", "--p", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("10"), "{out}");
    let (code, _, _) = run(&["weights", "certify", "--m", "3", "--p", "3"]);
    assert_eq!(code, 0);
}

#[test]
fn failing_epi_family() {
    let (code, _, _) = run(&["weights", "epi", "--file", &data("epi_z8.json")]);
    assert_eq!(code, 1);
}

#[test]
fn usage_and_data_errors() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["theta", "check", "--file", "/nonexistent/file.json"]).0, 2);
    assert_eq!(run(&["weights", "certify", "--m", "6", "--p", "4"]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn json_report_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for i in 0..2 {
        let path = dir.path().join(format!("r{i}.json"));
        let p = path.display().to_string();
        let (code, _, _) = run(&["--json", &p, "congruence", "comodule", "--file", &data("comodule.json"), "--samples", "8"]);
        assert_eq!(code, 0);
        reports.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
    let v: serde_json::Value = serde_json::from_slice(&reports[0]).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["seed"], 20240601);
    assert_eq!(v["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn seed_changes_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.display().to_string();
    let (code, _, _) = run(&["--seed", "7", "--json", &p, "bialg", "height1", "--p", "2", "--f", "1", "--kmax", "2"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
}
