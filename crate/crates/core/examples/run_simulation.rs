//! Simulate one configuration under each scheduler and print the summaries.
//!
//! cargo run --release --example run_simulation -- [seed]

use circle_gather::oracle::{random_config, GeneratorSpec};
use circle_gather::sim::{run, PolicySpec, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map_or(Ok(3), |s| s.parse())?;
    let config = random_config(&GeneratorSpec::new(7, 120, seed))?;
    println!(
        "initial: {}",
        config
            .positions()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );

    for policy in [
        PolicySpec::fsync(),
        PolicySpec::ssync(seed),
        PolicySpec::async_random(seed),
    ] {
        let trace = run(&RunConfig::new(config.clone(), policy))?;
        let s = &trace.summary;
        println!(
            "{:>12}: {:?} at {} after {} events, t = {}, first multiplicity at {}, {} countermoves",
            s.policy.to_string(),
            s.outcome,
            s.gather_point
                .as_ref()
                .map_or("-".into(), ToString::to_string),
            s.event_count,
            s.final_time,
            s.first_multiplicity_time
                .as_ref()
                .map_or("-".into(), ToString::to_string),
            trace.countermoves().len(),
        );
    }
    Ok(())
}
