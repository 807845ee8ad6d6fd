use std::process::{Command, Output};

fn weil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weil")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn quantize_prints_the_image() {
    let o = weil(&["quantize", "--alg", "su2", "--expr", "v1 - y2*y3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "u1 - x2*x3\n");
}

#[test]
fn duflo_of_lambda() {
    let o = weil(&["duflo", "--alg", "su2", "--expr", "v1*v1 + v2*v2 + v3*v3", "--order", "4"]);
    assert_eq!(stdout(&o), "u1^2 + u2^2 + u3^2 - 1/4\n");
}

#[test]
fn core_suite_passes() {
    let o = weil(&["verify", "--alg", "su2", "--suite", "core", "--deg", "6"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn broken_jacobi_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "bad", "dim": 5, "f": [[1,2,3,1],[1,4,5,1]]}"#).unwrap();
    let p = path.to_str().unwrap();
    let o = weil(&["verify", "--alg", p, "--suite", "core", "--deg", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Jacobi"));
    let o = weil(&["validate", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL jacobi"));
}

#[test]
fn validate_toml_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("su2.toml");
    std::fs::write(&path, "name = \"su2\"\ndim = 3\nf = [[1, 2, 3, \"1\"]]\n").unwrap();
    let o = weil(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 3);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(weil(&["quantize", "--alg", "su2", "--expr", "y1*("]).status.code(), Some(2));
    assert_eq!(weil(&["quantize", "--alg", "nope", "--expr", "y1"]).status.code(), Some(2));
    assert_eq!(weil(&["verify", "--alg", "so4", "--suite", "sphere"]).status.code(), Some(2));
    assert_eq!(weil(&["verify", "--alg", "su2", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(weil(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = weil(&["verify", "--alg", "su2", "--suite", "clifford", "--deg", "4", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ja = std::fs::read(&a).unwrap();
    assert_eq!(ja, std::fs::read(&b).unwrap());
    let text = String::from_utf8(ja).unwrap();
    assert!(text.contains("\"schema\": \"weilkit-report/1\""));
    assert!(text.contains("\"degree\": 4"));
    assert!(!text.contains("timing_ms"));
}

#[test]
fn cohomology_and_casimir() {
    let o = weil(&["cohomology", "--alg", "su2", "--space", "ext"]);
    assert_eq!(stdout(&o), "H^0 = 1\nH^1 = 0\nH^2 = 0\nH^3 = 1\n");
    let o = weil(&["cohomology", "--alg", "su2", "--space", "cl"]);
    assert_eq!(stdout(&o), "H^even = 0\nH^odd = 0\n");
    let o = weil(&["casimir", "--alg", "su2"]);
    assert!(stdout(&o).contains("dirac^2 = 1/2*u1^2 + 1/2*u2^2 + 1/2*u3^2 - 1/8"));
}
