mod common;

use circle_gather::angle::Angle;
use circle_gather::config::{Configuration, RobotId};
use circle_gather::protocol::{MultiplicityThreshold, RobotMemory};
use circle_gather::sim::{
    run, Event, EventKind, Outcome, PolicySpec, RunConfig, ScriptedActivation, SimError, SimTime,
    Trace,
};
use proptest::prelude::*;

fn worked() -> Configuration {
    Configuration::from_fractions(20, &[0, 2, 9, 14]).unwrap()
}

fn gathered(cfg: &RunConfig) -> Trace {
    let trace = run(cfg).unwrap();
    assert_eq!(trace.summary.outcome, Outcome::Gathered);
    trace.validate().unwrap();
    trace
}

fn act(robot: &str, t: (i64, i64), lc: (i64, i64)) -> ScriptedActivation {
    ScriptedActivation {
        robot: RobotId::new(robot),
        t: SimTime::new(t.0, t.1),
        lc: SimTime::new(lc.0, lc.1),
    }
}

#[test]
fn worked_example_gathers_under_fsync() {
    let trace = gathered(&RunConfig::new(worked(), PolicySpec::fsync()));
    let s = &trace.summary;
    assert!(s.gathered);
    assert!(s.max_simultaneous_multiplicities <= 2);
    let point = s.gather_point.clone().unwrap();
    let end = trace.positions_at(&s.final_time);
    assert!(end.iter().all(|(_, p)| p == &point));
}

#[test]
fn two_robots_gather() {
    let c = Configuration::from_fractions(10, &[0, 3]).unwrap();
    for policy in [
        PolicySpec::fsync(),
        PolicySpec::ssync(1),
        PolicySpec::async_random(1),
    ] {
        gathered(&RunConfig::new(c.clone(), policy));
    }
}

#[test]
fn single_robot_is_already_gathered() {
    let c = Configuration::from_fractions(10, &[3]).unwrap();
    let trace = gathered(&RunConfig::new(c, PolicySpec::fsync()));
    assert_eq!(trace.summary.gather_point, Some(Angle::new(3, 10)));
}

#[test]
fn followers_alone_never_move() {
    // r2 (9/20) and r3 (14/20) are followers of the worked example
    let script: Vec<_> = (0..6)
        .flat_map(|k| [act("r2", (2 * k, 1), (1, 2)), act("r3", (2 * k, 1), (1, 2))])
        .collect();
    let trace = run(&RunConfig::new(worked(), PolicySpec::scripted(script))).unwrap();
    assert_eq!(trace.summary.outcome, Outcome::ScheduleExhausted);
    assert!(trace
        .records
        .iter()
        .all(|r| r.event.kind() != EventKind::MoveStart));
    for r in &trace.records {
        if let Event::Decide { decision, .. } = &r.event {
            assert_eq!(decision.memory, RobotMemory::Off);
        }
    }
}

#[test]
fn event_limit_returns_partial_trace() {
    let mut cfg = RunConfig::new(worked(), PolicySpec::fsync());
    cfg.limits.max_events = 1;
    match run(&cfg) {
        Err(SimError::LimitExceeded(t)) => {
            assert_eq!(t.records.len(), 1);
            assert_eq!(t.summary.outcome, Outcome::LimitExceeded);
        }
        other => panic!("expected LimitExceeded, got {other:?}"),
    }
}

#[test]
fn bad_scripts_are_rejected() {
    for script in [
        vec![act("nobody", (0, 1), (1, 2))],
        vec![act("r0", (0, 1), (0, 1))],
        vec![act("r0", (1, 1), (1, 2)), act("r0", (1, 1), (1, 2))],
    ] {
        let err = run(&RunConfig::new(worked(), PolicySpec::scripted(script))).unwrap_err();
        assert!(matches!(err, SimError::ScriptViolation(_)), "{err}");
    }
}

#[test]
fn activating_a_moving_robot_is_rejected() {
    // r0 moves 1/10 starting at t = 1/2; looking again at 11/20 is too early
    let script = vec![act("r0", (0, 1), (1, 2)), act("r0", (11, 20), (1, 2))];
    let err = run(&RunConfig::new(worked(), PolicySpec::scripted(script))).unwrap_err();
    assert!(matches!(err, SimError::ScriptViolation(_)), "{err}");
}

#[test]
fn symmetric_start_is_rejected() {
    let c = Configuration::from_fractions(4, &[0, 1, 2, 3]).unwrap();
    let err = run(&RunConfig::new(c, PolicySpec::fsync())).unwrap_err();
    assert!(matches!(err, SimError::IllegalInitial(_)), "{err}");
}

#[test]
fn small_fairness_window_is_rejected() {
    let mut p = PolicySpec::ssync(3);
    p.fairness_window = Some(2);
    let err = run(&RunConfig::new(worked(), p)).unwrap_err();
    assert!(matches!(err, SimError::InvalidPolicy(_)), "{err}");
}

#[test]
fn jsonl_roundtrip_and_replay() {
    let trace = gathered(&RunConfig::new(worked(), PolicySpec::async_random(5)));
    let text = trace.to_jsonl();
    let back = Trace::from_jsonl(&text).unwrap();
    assert_eq!(back, trace);
    assert_eq!(back.to_jsonl(), text);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with(r#"{"kind":"summary""#), "{last}");
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["kind"].is_string());
    }
}

#[test]
fn replayed_positions_match_moves() {
    let trace = gathered(&RunConfig::new(worked(), PolicySpec::ssync(9)));
    for r in &trace.records {
        let pos = trace.positions_at(&r.t);
        let here = &pos.iter().find(|(id, _)| id == &r.robot).unwrap().1;
        match &r.event {
            Event::MoveEnd { position } | Event::Activate { position, .. } => {
                assert_eq!(here, position)
            }
            Event::MoveStart { from, .. } => assert_eq!(here, from),
            _ => {}
        }
    }
}

#[test]
fn activate_and_snapshot_share_a_timestamp() {
    let trace = gathered(&RunConfig::new(worked(), PolicySpec::async_random(2)));
    for w in trace.records.windows(2) {
        if w[0].event.kind() == EventKind::Activate {
            assert_eq!(w[1].event.kind(), EventKind::Snapshot);
            assert_eq!((&w[0].t, &w[0].robot), (&w[1].t, &w[1].robot));
        }
    }
}

#[test]
fn quarter_turn_threshold_strands_two_points() {
    let c = Configuration::from_positions(
        [(5, 24), (7, 15), (17, 24), (91, 120)]
            .into_iter()
            .map(|(a, b)| Angle::new(a, b)),
    )
    .unwrap();
    let mut cfg = RunConfig::new(c.clone(), PolicySpec::fsync());
    cfg.limits.max_events = 20_000;
    cfg.options.multiplicity_threshold = MultiplicityThreshold::HalfPi;
    match run(&cfg) {
        Err(SimError::LimitExceeded(t)) => {
            let end = t.positions_at(&t.summary.final_time);
            let mut points: Vec<&Angle> = end.iter().map(|(_, p)| p).collect();
            points.sort();
            points.dedup();
            assert_eq!(points.len(), 2, "{points:?}");
        }
        other => panic!("expected a stuck run, got {other:?}"),
    }
    cfg.options.multiplicity_threshold = MultiplicityThreshold::Pi;
    gathered(&cfg);
}

#[test]
fn run_config_json_roundtrip() {
    let mut cfg = RunConfig::new(worked(), PolicySpec::async_random(11));
    cfg.limits.max_time = Some(SimTime::new(500, 1));
    let back = RunConfig::from_json(&cfg.to_json()).unwrap();
    assert_eq!(back, cfg);
    let minimal = r#"{"initial":{"robots":[{"id":"a","pos":"0/1"},{"id":"b","pos":"1/3"},{"id":"c","pos":"1/2"}]},"policy":{"kind":"fsync"}}"#;
    let parsed = RunConfig::from_json(minimal).unwrap();
    assert_eq!(parsed.limits.max_events, 100_000);
    gathered(&parsed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_async_runs_gather(nums in proptest::sample::subsequence((0..60i64).collect::<Vec<_>>(), 3..7), seed in any::<u64>()) {
        let c = Configuration::from_fractions(60, &nums).unwrap();
        prop_assume!(c.check_legal_initial().is_ok());
        let trace = gathered(&RunConfig::new(c, PolicySpec::async_random(seed)));
        prop_assert!(trace.countermoves().iter().all(|c| c.is_exact()));
        prop_assert!(trace.summary.max_resting_multiplicities <= 2);
    }
}
