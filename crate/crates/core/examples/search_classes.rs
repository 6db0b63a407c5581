//! Find a small example of each configuration class.
//!
//! cargo run --release --example search_classes

use circle_gather::analysis::{analyze, ConfigClass};
use circle_gather::oracle::{search_class, shrink, GeneratorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for class in ConfigClass::ALL {
        let found =
            (3..=10).find_map(|n| search_class(class, &GeneratorSpec::new(n, 120, 0), 20_000));
        let Some(config) = found else {
            println!("{class}: none found");
            continue;
        };
        let small = shrink(&config, |c| analyze(c).is_ok_and(|r| r.class == class));
        let report = analyze(&small)?;
        let positions: Vec<String> = small.positions().iter().map(ToString::to_string).collect();
        println!(
            "{class:>3}: {{{}}} expected leaders {:?}",
            positions.join(", "),
            report.expected_leaders
        );
    }
    Ok(())
}
