//! Hold back a configuration's expected leaders with scripted schedules and
//! watch the other robots' probes get undone.
//!
//! cargo run --release --example adversarial_schedule

use circle_gather::analysis::analyze;
use circle_gather::config::Configuration;
use circle_gather::oracle::{adversarial_script, Adversary};
use circle_gather::sim::{run, PolicySpec, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // two confused leaders, one of them with an unsafe neighbour
    let config = Configuration::from_fractions(12, &[0, 5, 6, 9, 11])?;
    let report = analyze(&config)?;
    println!(
        "class {}, expected leaders {:?}",
        report.class, report.expected_leaders
    );

    for delayed in &report.expected_leaders {
        for adversary in [Adversary::DelayLast, Adversary::Pounce] {
            let script = adversarial_script(&config, std::slice::from_ref(delayed), 40, adversary);
            let trace = run(&RunConfig::new(
                config.clone(),
                PolicySpec::scripted(script),
            ))?;
            let s = &trace.summary;
            println!(
                "{adversary:?} holding {delayed}: {:?}, first multiplicity at {}",
                s.outcome,
                s.first_multiplicity_time
                    .as_ref()
                    .map_or("never".into(), ToString::to_string)
            );
            for c in trace.countermoves() {
                println!(
                    "  {} undid a {} probe: {} -> {} (exact: {})",
                    c.robot,
                    c.from_state.name(),
                    c.before,
                    c.after,
                    c.is_exact()
                );
            }
        }
    }
    Ok(())
}
