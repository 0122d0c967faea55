//! End-to-end runs of the `dotpairs` binary, checking output and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dotpairs"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_three_point(dir: &Path) {
    fs::write(
        dir.join("three.json"),
        r#"{"field":{"kind":"rational"},"dim":2,"label":"three","points":[["1","0"],["0","1"],["1","1"]]}"#,
    )
    .unwrap();
}

#[test]
fn gen_line_fan_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "line-fan", "--n", "12", "--s", "3", "--out", "lf.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let set = dotpairs::io::load_point_set(dir.path().join("lf.json")).unwrap();
    assert_eq!(set.len(), 12);
}

#[test]
fn gen_separated_grid_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "separated-grid", "--n", "90", "--m", "10"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let set = dotpairs::io::parse_point_set(&stdout(&o)).unwrap();
    assert_eq!(set.len(), 99);
}

#[test]
fn gen_parameter_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["gen", "line-fan", "--n", "10", "--s", "3"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["gen", "line-fan", "--n", "12"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["gen", "separated-grid", "--n", "100", "--m", "10"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["gen", "pencil", "--k", "0"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(1));
}

#[test]
fn gen_validation_failure_exits_two() {
    // s = 2 asks for no two points on a line, which no 2+ point set satisfies
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["gen", "line-fan", "--n", "4", "--s", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn count_both_methods() {
    let dir = tempfile::tempdir().unwrap();
    write_three_point(dir.path());
    let o = run(&["count", "three.json", "--alpha", "1", "--beta", "1", "--method", "both"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "12");

    let o = run(&["count", "three.json", "--alpha", "1", "--beta", "1", "--verbose"], dir.path());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 4);
    assert!(out.contains("(1, 1)\twt_alpha=2\twt_beta=2\tpi=4"));
}

#[test]
fn count_rejects_zero_and_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    write_three_point(dir.path());
    let zero = run(&["count", "three.json", "--alpha", "0", "--beta", "1"], dir.path());
    assert_eq!(zero.status.code(), Some(1));
    let junk = run(&["count", "three.json", "--alpha", "1/0", "--beta", "1"], dir.path());
    assert_eq!(junk.status.code(), Some(1));
    let missing = run(&["count", "nope.json", "--alpha", "1", "--beta", "1"], dir.path());
    assert_eq!(missing.status.code(), Some(1));
    fs::write(dir.path().join("dup.json"), r#"{"field":{"kind":"rational"},"dim":2,"label":"","points":[["1","1"],["1","1"]]}"#).unwrap();
    assert_eq!(run(&["count", "dup.json", "--alpha", "1", "--beta", "1"], dir.path()).status.code(), Some(1));
}

#[test]
fn count_empty_set() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("e.json"), r#"{"field":{"kind":"prime","p":5},"dim":2,"label":"","points":[]}"#).unwrap();
    let o = run(&["count", "e.json", "--alpha", "1", "--beta", "-1", "--method", "both"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
}

#[test]
fn stats_examples() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("four.json"),
        r#"{"field":{"kind":"rational"},"dim":2,"label":"","points":[["0","0"],["1","1"],["2","2"],["0","1"]]}"#,
    )
    .unwrap();
    let o = run(&["stats", "four.json"], dir.path());
    assert!(stdout(&o).contains("s_star: 3"));

    write_three_point(dir.path());
    let o = run(&["stats", "three.json", "--gamma", "1"], dir.path());
    assert!(stdout(&o).contains("f_=2: 3"));

    fs::write(
        dir.path().join("line3.json"),
        r#"{"field":{"kind":"rational"},"dim":3,"label":"","points":[["0","0","0"],["1","1","1"],["2","2","2"],["0","1","0"]]}"#,
    )
    .unwrap();
    let o = run(&["stats", "line3.json", "--g"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("t_star: 3"));
    assert!(out.contains("infinite_detected: true"));
}

#[test]
fn verify_line_fan_passes() {
    let dir = tempfile::tempdir().unwrap();
    run(&["gen", "line-fan", "--n", "12", "--s", "3", "--out", "lf.json"], dir.path());
    let o = run(&["verify", "lf.json", "--alpha", "1", "--beta", "1", "--json", "r.json", "--csv", "r.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let reports: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    let arr = reports.as_array().unwrap();
    assert!(arr.iter().any(|r| r["verdict"] == "report_only"));
    assert!(arr.iter().all(|r| r["verdict"] != "fail"));
    let csv = fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), dotpairs::bounds::CSV_HEADER);
}

#[test]
fn verify_hand_crafted_set() {
    let dir = tempfile::tempdir().unwrap();
    write_three_point(dir.path());
    let o = run(&["verify", "three.json", "--alpha", "1", "--beta", "1", "--json", "-"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("report_only"));
}

#[test]
fn verify_fault_injection_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    write_three_point(dir.path());
    let o = run(&["verify", "three.json", "--alpha", "1", "--beta", "1", "--inject-fault", "1000"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_covert_senger_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["sweep", "covert-senger", "--q", "31", "--n", "800", "--trials", "5", "--seed", "7", "--csv", out];
    assert_eq!(run(&args("a.csv"), dir.path()).status.code(), Some(0));
    assert_eq!(run(&args("b.csv"), dir.path()).status.code(), Some(0));
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().skip(1).all(|l| l.starts_with("covert_senger,800,2,F31,")));
}

#[test]
fn sweep_envelope_trend_and_st_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["sweep", "envelope-trend", "--construction", "line-fan", "--s-exponent", "2/3", "--n", "60,120"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
    let o = run(&["sweep", "st-ratio", "--n", "25"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("st_richness,25,2,Q"));
}

#[test]
fn sweep_invalid_parameters_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["sweep", "covert-senger", "--q", "30", "--n", "10"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["sweep", "covert-senger", "--q", "5", "--n", "26"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["sweep", "st-ratio", "--n", "10"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["sweep", "envelope-trend", "--construction", "pencil", "--n", "60"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["sweep", "envelope-trend", "--s-exponent", "abc", "--n", "60"], dir.path()).status.code(), Some(1));
}
