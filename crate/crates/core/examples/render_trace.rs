//! Simulate a run, write its JSONL trace and render it to SVG.
//!
//! cargo run --release --example render_trace -- [out-dir]

use std::path::PathBuf;

use circle_gather::config::Configuration;
use circle_gather::render::{render_svg, RenderSpec};
use circle_gather::sim::{run, PolicySpec, RunConfig, Trace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let config = Configuration::from_fractions(20, &[0, 2, 9, 14])?;
    let trace = run(&RunConfig::new(config, PolicySpec::async_random(4)))?;

    let jsonl = out.join("worked_example.jsonl");
    std::fs::write(&jsonl, trace.to_jsonl())?;
    let reread = Trace::from_jsonl(&std::fs::read_to_string(&jsonl)?)?;
    assert_eq!(reread, trace);

    let spec = RenderSpec {
        stride: RenderSpec::auto_stride(&trace, 25),
        ..RenderSpec::default()
    };
    let svg = out.join("worked_example.svg");
    std::fs::write(&svg, render_svg(&trace, &spec))?;
    println!(
        "{} records -> {}, {}",
        trace.records.len(),
        jsonl.display(),
        svg.display()
    );
    Ok(())
}
