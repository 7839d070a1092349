use std::path::Path;
use std::process::{Command, Output};

fn lcorners(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lcorners")).args(args).output().expect("spawn lcorners")
}

fn run_ok(args: &[&str], out: &Path) -> String {
    let mut full = args.to_vec();
    full.extend(["--out", out.to_str().unwrap()]);
    let o = lcorners(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    std::fs::read_to_string(out).unwrap()
}

/// Non-comment lines, split on commas; the first is the header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn crystal_roots_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(&["roots", "--N", "3", "--n", "5"], &dir.path().join("r.csv"));
    let r = rows(&csv);
    assert_eq!(r[0], ["k", "i", "l"]);
    assert_eq!(r.len(), 1 + 15);
    assert!(csv.contains("# version: "));
    assert!(csv.contains("# config: "));
    assert!(csv.contains("# truncation: "));
}

#[test]
fn bessel_zeros_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(&["roots", "--bessel", "--order", "0", "--count", "5"], &dir.path().join("j.csv"));
    let r = rows(&csv);
    assert_eq!(r.len(), 6);
    assert!((num(&r[1][1]) - 2.4048).abs() < 1e-4);
    assert!((num(&r[2][1]) - 5.5201).abs() < 1e-4);
}

#[test]
fn reflected_levels_have_exact_zeros() {
    let dir = tempfile::tempdir().unwrap();
    let r = rows(&run_ok(&["roots", "--N", "2", "--n", "4"], &dir.path().join("r.csv")));
    let zeros = r[1..].iter().filter(|row| row[0] == "4" && num(&row[2]) == 0.0).count();
    assert_eq!(zeros, 2);
}

#[test]
fn finite_covariance_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let r = rows(&run_ok(
        &["cov", "--finite", "--N", "4", "--n", "8", "--pairs", "(1,4),(1,5)"],
        &dir.path().join("c.csv"),
    ));
    assert_eq!(r.len(), 2);
    assert_eq!(r[0], ["a", "k", "b", "l", "value", "method"]);
    assert!(num(&r[1][4]) > 0.0);
}

#[test]
fn limit_covariance_entry() {
    let dir = tempfile::tempdir().unwrap();
    let r =
        rows(&run_ok(&["cov", "--limit", "--a", "1", "--s", "0", "--b", "1", "--t", "0"], &dir.path().join("c.csv")));
    assert_eq!(r[0], ["a", "s", "b", "t", "value", "method", "truncation_params"]);
    assert!((num(&r[1][4]) - 4.045059961224669).abs() < 1e-8);
    assert_eq!(r[1][5], "quadrature");
}

#[test]
fn oracle_summary_on_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.csv");
    let o = lcorners(&["cov", "--oracle", "--N", "3", "--n", "6", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("max |spectral − oracle|"), "{stdout}");
    assert_eq!(stdout.lines().count(), 1);
}

#[test]
fn monte_carlo_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["mc", "--infinity", "--N", "2", "--n", "3", "--samples", "3000", "--seed", "7"];
    let a = run_ok(&args, &dir.path().join("a.csv"));
    let b = run_ok(&args, &dir.path().join("a.csv"));
    assert_eq!(a, b);
    let r = rows(&a);
    assert_eq!(r[0], ["a", "k", "b", "l", "empirical", "stderr", "exact", "z"]);
}

#[test]
fn tridiagonal_and_polymer_runs() {
    let dir = tempfile::tempdir().unwrap();
    let r = rows(&run_ok(
        &["mc", "--tridiag", "--k", "4", "--N", "6", "--beta", "10000", "--samples", "20000", "--seed", "1"],
        &dir.path().join("t.csv"),
    ));
    assert_eq!(r.len(), 5);
    for row in &r[1..] {
        assert!((num(&row[1]) / num(&row[3]) - 1.0).abs() < 0.1, "{row:?}");
    }
    let r = rows(&run_ok(
        &["mc", "--polymer", "--a", "1", "--v", "0", "--samples", "2000", "--seed", "7", "--V", "20", "--B", "60"],
        &dir.path().join("p.csv"),
    ));
    assert_eq!(r.len(), 3);
    assert_eq!(r[2][5], "polymer-truncated");
    assert!(num(&r[2][6]).abs() < 4.0);
}

#[test]
fn convergence_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let r = rows(&run_ok(
        &["converge", "--roots", "--r", "1", "--alpha", "0", "--Ns", "100,400"],
        &dir.path().join("r.csv"),
    ));
    assert!(num(&r[2][5]) >= 8.0);
    let r = rows(&run_ok(
        &["converge", "--qasymp", "--r", "1", "--alpha", "0", "--Ns", "100,200"],
        &dir.path().join("q.csv"),
    ));
    assert!(num(&r[2][2]) >= 1.7);
    let csv = run_ok(
        &["converge", "--theorem1", "--Ns", "20,40", "--a", "1", "--s", "0", "--b", "1", "--t", "0"],
        &dir.path().join("t.csv"),
    );
    assert!(csv.contains("# error_decreasing: true"));
}

#[test]
fn json_output() {
    let dir = tempfile::tempdir().unwrap();
    let text = run_ok(&["roots", "--N", "2", "--n", "2", "--format", "json"], &dir.path().join("r.json"));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["columns"][2], "l");
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["meta"]["command"], "roots");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"N": 2, "n": 3}"#).unwrap();
    let r = rows(&run_ok(&["roots", "--config", cfg.to_str().unwrap(), "--n", "4"], &dir.path().join("r.csv")));
    assert_eq!(r.len(), 1 + 10);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let out = out.to_str().unwrap();
    assert_eq!(lcorners(&["roots", "--N", "5", "--n", "3", "--out", out]).status.code(), Some(2));
    assert_eq!(lcorners(&["roots", "--N", "3", "--n", "5"]).status.code(), Some(2));
    assert_eq!(lcorners(&["roots", "--bogus"]).status.code(), Some(2));
    assert_eq!(lcorners(&["cov", "--N", "3", "--n", "5", "--out", out]).status.code(), Some(2));
    let bad = lcorners(&["cov", "--limit", "--a", "1", "--s", "-2", "--out", out]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("max(−order, 1)"));
    let missing = dir.path().join("no/such/dir/x.csv");
    assert_eq!(lcorners(&["roots", "--N", "1", "--n", "1", "--out", missing.to_str().unwrap()]).status.code(), Some(4));
    let cfg = dir.path().join("absent.json");
    assert_eq!(lcorners(&["roots", "--config", cfg.to_str().unwrap(), "--out", out]).status.code(), Some(4));
}
