//! Run the same configuration with both multiplicity-merge thresholds. With
//! the quarter turn, two multiplicity points can end up too far apart to
//! merge and the run never gathers.
//!
//! cargo run --release --example compare_thresholds

use std::collections::BTreeSet;

use circle_gather::angle::Angle;
use circle_gather::config::Configuration;
use circle_gather::protocol::MultiplicityThreshold;
use circle_gather::sim::{run, PolicySpec, RunConfig, SimError};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = Configuration::from_positions(
        [(5, 24), (7, 15), (17, 24), (91, 120)]
            .into_iter()
            .map(|(p, q)| Angle::new(p, q)),
    )?;
    for threshold in [MultiplicityThreshold::HalfPi, MultiplicityThreshold::Pi] {
        let mut cfg = RunConfig::new(config.clone(), PolicySpec::fsync());
        cfg.options.multiplicity_threshold = threshold;
        cfg.limits.max_events = 5_000;
        let trace = match run(&cfg) {
            Ok(t) => t,
            Err(SimError::LimitExceeded(t)) => *t,
            Err(e) => return Err(e.into()),
        };
        let end = trace.positions_at(&trace.summary.final_time);
        let points: BTreeSet<String> = end.iter().map(|(_, p)| p.to_string()).collect();
        println!(
            "{threshold:?}: {:?} after {} events, robots at {:?}",
            trace.summary.outcome, trace.summary.event_count, points
        );
    }
    Ok(())
}
