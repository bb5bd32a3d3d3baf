use std::process::{Command, Output};

fn g2kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2kit"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn same_seed_gives_identical_output() {
    let args = [
        "--suite",
        "oracles",
        "--seed",
        "42",
        "--samples",
        "20",
        "--json-only",
    ];
    let a = g2kit(&args);
    let b = g2kit(&args);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stderr.is_empty());
    let text = String::from_utf8(a.stdout).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["seed"], 42);
        assert!(v.get("runtime_ms").is_none());
    }
}

#[test]
fn unknown_suite_and_bad_flags_exit_two() {
    let out = g2kit(&["--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(g2kit(&["--samples", "0"]).status.code(), Some(2));
    assert_eq!(g2kit(&["--bogus"]).status.code(), Some(2));
}

#[test]
fn controls_fail_as_expected_and_the_suite_passes() {
    let out = g2kit(&["--suite", "negative-controls", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 6);
    assert!(String::from_utf8_lossy(&out.stderr).contains("0 unexpected"));
}

#[test]
fn list_names_suites_and_checks() {
    let suites = String::from_utf8(g2kit(&["--list"]).stdout).unwrap();
    assert!(suites.lines().any(|l| l == "negative-controls"));
    let checks = String::from_utf8(g2kit(&["--list", "--suite", "algebra"]).stdout).unwrap();
    assert!(checks.lines().any(|l| l.starts_with("algebra.g2-span\t")));
}

#[test]
fn out_file_and_sample_dump() {
    let dir = std::env::temp_dir().join(format!("g2kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.jsonl");
    let samples = dir.join("samples");
    let run = g2kit(&[
        "--suite",
        "hypersurface",
        "--samples",
        "5",
        "--json-only",
        "--out",
        out.to_str().unwrap(),
        "--dump-samples",
        samples.to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    assert!(run.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 3);
    let csv = std::fs::read_to_string(samples.join("hyp.sphere.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 6);
    std::fs::remove_dir_all(&dir).unwrap();
}
