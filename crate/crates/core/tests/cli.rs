mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use circle_gather::cli::cmd_run;
use circle_gather::config::Configuration;
use circle_gather::sim::{PolicySpec, RunConfig, Trace};
use tempfile::TempDir;

fn gather_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gather-sim"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn worked_run(dir: &Path, policy: PolicySpec) -> String {
    let c = Configuration::from_fractions(20, &[0, 2, 9, 14]).unwrap();
    write(dir, "run.json", &RunConfig::new(c, policy).to_json())
}

#[test]
fn analyze_fixture_a() {
    let out = gather_sim(&["analyze", common::fixture("class_a.json").to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "A");
    assert_eq!(v["leader"], "0/1");
    assert_eq!(v["robots"].as_array().unwrap().len(), 3);
    assert_eq!(v["robots"][0]["tag"], "sure-leader");
}

#[test]
fn analyze_worked_example_reports_safe_neighbor() {
    let out = gather_sim(&[
        "analyze",
        common::fixture("worked_example.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let r0 = &v["robots"][0];
    assert_eq!(r0["tag"], "confused-leader");
    assert_eq!(r0["possibility"], "both");
    assert_eq!(r0["safe_neighbor"], true);
    assert!(v["robots"][2].get("safe_neighbor").is_none());
}

#[test]
fn analyze_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let decimal = write(
        dir.path(),
        "d.json",
        r#"{"robots":[{"id":"a","pos":"1.5"}]}"#,
    );
    assert_eq!(code(&gather_sim(&["analyze", &decimal])), 1);
    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&gather_sim(&["analyze", missing.to_str().unwrap()])),
        1
    );
    let symmetric = write(
        dir.path(),
        "s.json",
        r#"{"robots":[{"id":"a","pos":"0/1"},{"id":"b","pos":"1/3"},{"id":"c","pos":"2/3"}]}"#,
    );
    let out = gather_sim(&["analyze", &symmetric]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("symmetric"));
    let stacked = write(
        dir.path(),
        "m.json",
        r#"{"robots":[{"id":"a","pos":"1/5"},{"id":"b","pos":"1/5"}]}"#,
    );
    assert_eq!(code(&gather_sim(&["analyze", &stacked])), 2);
}

#[test]
fn run_writes_trace_and_svg() {
    let dir = TempDir::new().unwrap();
    let cfg = worked_run(dir.path(), PolicySpec::async_random(4));
    let trace = dir.path().join("t.jsonl");
    let svg = dir.path().join("t.svg");
    let out = gather_sim(&[
        "run",
        &cfg,
        "--trace",
        trace.to_str().unwrap(),
        "--render",
        svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["outcome"], "gathered");
    let t = Trace::from_jsonl(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert!(t.summary.gathered);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn run_event_limit_exits_3_with_partial_trace() {
    let dir = TempDir::new().unwrap();
    let c = Configuration::from_fractions(20, &[0, 2, 9, 14]).unwrap();
    let mut cfg = RunConfig::new(c, PolicySpec::fsync());
    cfg.limits.max_events = 5;
    let path = write(dir.path(), "run.json", &cfg.to_json());
    let trace = dir.path().join("t.jsonl");
    assert_eq!(
        code(&gather_sim(&[
            "run",
            &path,
            "--trace",
            trace.to_str().unwrap()
        ])),
        3
    );
    let t = Trace::from_jsonl(&fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(t.records.len(), 5);
}

#[test]
fn run_rejects_illegal_inputs() {
    let dir = TempDir::new().unwrap();
    let script = r#"{"initial":{"robots":[{"id":"a","pos":"0/1"},{"id":"b","pos":"1/5"},{"id":"c","pos":"1/2"}]},
        "policy":{"kind":"scripted","script":[{"robot":"zed","t":"0/1","lc":"1/2"}]}}"#;
    assert_eq!(
        code(&gather_sim(&["run", &write(dir.path(), "a.json", script)])),
        2
    );
    let symmetric = r#"{"initial":{"robots":[{"id":"a","pos":"0/1"},{"id":"b","pos":"1/2"}]},"policy":{"kind":"fsync"}}"#;
    assert_eq!(
        code(&gather_sim(&[
            "run",
            &write(dir.path(), "b.json", symmetric)
        ])),
        2
    );
    assert_eq!(
        code(&gather_sim(&["run", &write(dir.path(), "c.json", "{")])),
        1
    );
}

#[test]
fn render_reads_a_trace() {
    let dir = TempDir::new().unwrap();
    let cfg = worked_run(dir.path(), PolicySpec::fsync());
    let trace = dir.path().join("t.jsonl");
    cmd_run(Path::new(&cfg), Some(&trace), None).unwrap();
    let svg = dir.path().join("out.svg");
    let out = gather_sim(&[
        "render",
        trace.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
        "--stride",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains("frame-0") && text.trim_end().ends_with("</svg>"));
}

#[test]
fn verify_passes_and_catches_the_mutant() {
    let args = [
        "verify",
        "--n",
        "3..6",
        "--count",
        "60",
        "--seed",
        "42",
        "--class-budget",
        "0",
    ];
    let out = gather_sim(&args);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["sweep"]["checked"], 60);

    let mut bad = args.to_vec();
    bad.extend(["--mutant", "flip-leader"]);
    assert_eq!(code(&gather_sim(&bad)), 4);
}

#[test]
fn cmd_run_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = worked_run(dir.path(), PolicySpec::ssync(8));
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let ra = cmd_run(Path::new(&cfg), Some(&a), None).unwrap();
    let rb = cmd_run(Path::new(&cfg), Some(&b), None).unwrap();
    assert_eq!(ra, rb);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
