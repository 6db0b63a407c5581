//! Classify every robot of a four-robot configuration and print the
//! hypotheses each one cannot tell apart.
//!
//! cargo run --example analyze_worked_example

use circle_gather::analysis::{
    analyze, angle_sequence, hypothesis_configs, take_snapshot, true_leader,
};
use circle_gather::config::Configuration;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = Configuration::from_fractions(20, &[0, 2, 9, 14])?;
    println!("true leader: {}", true_leader(&config)?);
    for r in config.robots() {
        println!("  S({}) = {}", r.pos, angle_sequence(&config, &r.pos)?);
    }

    let report = analyze(&config)?;
    println!("class {}", report.class);
    for v in &report.robots {
        let h = hypothesis_configs(&take_snapshot(&config, &v.id)?)?;
        print!("  {} at {}: {:?}, {:?}", v.id, v.pos, v.tag, h.possibility);
        if let Some(safe) = v.safe_neighbor {
            print!(", safe neighbour {safe}");
        }
        println!();
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
