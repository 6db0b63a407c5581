use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use circle_gather::cli::{cmd_analyze, cmd_render, cmd_run, cmd_verify, parse_n_range, CliError};
use circle_gather::render::RenderSpec;
use circle_gather::verify::{Mutant, VerifyOptions};

#[derive(Parser)]
#[command(
    name = "gather-sim",
    version,
    about = "Analyse, simulate and verify robot gathering on a circle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every robot of a configuration and print the report as JSON.
    Analyze { config: PathBuf },
    /// Simulate a run configuration; prints the summary as JSON.
    Run {
        run_config: PathBuf,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        render: Option<PathBuf>,
        #[command(flatten)]
        look: RenderArgs,
    },
    /// Draw a recorded JSONL trace as SVG.
    Render {
        trace: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        look: RenderArgs,
    },
    /// Proposition sweep, class search and batch simulations.
    Verify {
        #[arg(long, default_value = "3..8", value_parser = parse_n_range)]
        n: (usize, usize),
        #[arg(long, default_value_t = 2000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 120)]
        denominator_bound: u64,
        #[arg(long, default_value_t = 100_000)]
        class_budget: usize,
        /// Configurations to simulate under every policy.
        #[arg(long, default_value_t = 0)]
        sim_count: usize,
        #[arg(long, hide = true)]
        mutant: Option<MutantArg>,
    },
}

#[derive(clap::Args)]
struct RenderArgs {
    /// Draw every N-th event time (default: about 36 frames).
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long, default_value_t = 960)]
    size: u32,
    #[arg(long)]
    no_labels: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    FlipLeader,
}

fn spec_for(look: &RenderArgs, trace_path: Option<&std::path::Path>) -> RenderSpec {
    let stride = look.stride.unwrap_or_else(|| {
        trace_path
            .and_then(|p| std::fs::read_to_string(p).ok())
            .and_then(|t| circle_gather::sim::Trace::from_jsonl(&t).ok())
            .map_or(1, |t| RenderSpec::auto_stride(&t, 36))
    });
    RenderSpec {
        stride: stride.max(1),
        size: look.size,
        show_labels: !look.no_labels,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<i32, CliError> = match cli.command {
        Command::Analyze { config } => cmd_analyze(&config).map(|json| {
            println!("{json}");
            0
        }),
        Command::Run {
            run_config,
            trace,
            render,
            look,
        } => {
            let spec = spec_for(&look, trace.as_deref());
            let render = render.as_deref().map(|p| (p, &spec));
            cmd_run(&run_config, trace.as_deref(), render).map(|out| {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.summary).expect("summary serializes")
                );
                out.exit_code
            })
        }
        Command::Render { trace, out, look } => {
            let spec = spec_for(&look, Some(&trace));
            cmd_render(&trace, &out, &spec).map(|()| 0)
        }
        Command::Verify {
            n,
            count,
            seed,
            denominator_bound,
            class_budget,
            sim_count,
            mutant,
        } => {
            let options = VerifyOptions {
                n_min: n.0,
                n_max: n.1,
                count,
                seed,
                denominator_bound,
                class_budget,
                sim_count,
                mutant: mutant.map(|MutantArg::FlipLeader| Mutant::FlipLeader),
                ..VerifyOptions::default()
            };
            let (report, code) = cmd_verify(&options);
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            Ok(code)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("gather-sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
