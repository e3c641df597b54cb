use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skew-aztec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("skew-aztec-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn check_reports_the_verdict() {
    let o = run(&["check", "--n", "8", "--m", "10", "--M", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("tilable\n"));
    assert!(s.contains("case Case1"));
    assert!(s.contains("ρ=8 𝔯=6"));
    let o = run(&["check", "--n", "2", "--m", "5", "--M", "9"]);
    assert!(stdout(&o).starts_with("not tilable"));
    let o = run(&["check", "--n", "8", "--m", "5", "--M", "8", "--json"]);
    let s = stdout(&o);
    assert!(s.contains("\"derived\"") && s.contains("Case2"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["check", "--n", "2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--n", "0", "--m", "1", "--M", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--n", "2", "--m", "5", "--M", "9"]).status.code(), Some(2));
}

#[test]
fn enumerate_counts_and_emits_tilings() {
    let dir = scratch_dir("enumerate");
    let out = dir.join("tilings.jsonl");
    let o = run(&["enumerate", "--n", "2", "--m", "2", "--M", "2", "--emit-tilings", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count 44"));
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 44);
    let o = run(&["enumerate", "--n", "2", "--m", "5", "--M", "9", "--transfer"]);
    assert!(stdout(&o).contains("count 0"));
}

#[test]
fn verify_suites_succeed() {
    let dir = scratch_dir("verify");
    let report = dir.join("duality.json");
    let o = run(&["verify", "identities", "--suite", "duality", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    assert!(std::fs::read_to_string(&report).unwrap().contains("\"groups\""));
    let o = run(&["verify", "correlations", "--n", "2", "--m", "2", "--M", "2", "--a", "0.7", "--pairs", "5"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn sample_and_render_write_files() {
    let dir = scratch_dir("sample");
    let svg = dir.join("t.svg");
    let tiling = dir.join("t.json");
    let stats = dir.join("red.csv");
    let o = run(&[
        "--seed", "3", "sample", "--n", "4", "--m", "5", "--M", "2", "--a", "0.8", "--steps", "2000",
        "--svg", svg.to_str().unwrap(), "--tiling-out", tiling.to_str().unwrap(), "--stats", stats.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<svg"));
    assert!(std::fs::read_to_string(&stats).unwrap().starts_with("xi,red_dots"));
    let again = dir.join("again.svg");
    let o = run(&[
        "render", "--n", "4", "--m", "5", "--M", "2", "--a", "0.8", "--tiling", tiling.to_str().unwrap(),
        "--svg", again.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn kernel_tables_are_csv() {
    let o = run(&["kernel", "cusp-airy", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = scratch_dir("kernel");
    let pts = dir.join("points.json");
    std::fs::write(&pts, r#"[{"xi": 0, "eta": 1}, {"xi": 2, "eta": 1}]"#).unwrap();
    let o = run(&["kernel", "finite", "--n", "2", "--m", "2", "--M", "2", "--a", "0.7", "--points", pts.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.lines().next().unwrap().ends_with("re,im,err_estimate"));
    assert_eq!(s.lines().count(), 5);
}

#[test]
fn failed_verification_exits_with_one() {
    // a single n leaves no ratio to check, so the convergence criterion cannot pass
    let o = run(&["verify", "convergence", "--theorem", "main", "--ns", "64"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}
