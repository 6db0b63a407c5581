//! Sweep generated configurations through the nine statement checks and the
//! leader cross-check.
//!
//! cargo run --release --example verify_propositions -- [count]

use circle_gather::oracle::{check_propositions, random_config, GeneratorSpec, Statement};
use circle_gather::verify::{sweep, VerifyOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: usize = std::env::args().nth(1).map_or(Ok(1000), |s| s.parse())?;

    let one = random_config(&GeneratorSpec::new(6, 60, 1))?;
    let report = check_propositions(&one)?;
    println!(
        "{} expected leader(s) in {}",
        report.expected_leaders,
        one.to_json().replace(['\n', ' '], "")
    );
    for s in Statement::ALL {
        println!(
            "  {:<38} {}",
            s.to_string(),
            if report.result(s).passed {
                "ok"
            } else {
                "FAILED"
            }
        );
    }

    let options = VerifyOptions {
        count,
        n_max: 10,
        ..VerifyOptions::default()
    };
    let r = sweep(&options);
    println!(
        "\nsweep of {} configurations: {} failures",
        r.checked,
        r.failures.len()
    );
    println!("expected-leader counts {:?}", r.expected_leader_counts);
    println!("classes {:?}", r.class_counts);
    Ok(())
}
