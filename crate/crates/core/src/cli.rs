//! The commands behind the `gather-sim` binary, as plain functions.
//!
//! Exit codes: 0 success, 1 unparsable input, 2 illegal input (symmetric or
//! multiplicity configurations, bad schedules), 3 event limit reached,
//! 4 a verification check or runtime invariant failed.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::analysis::analyze;
use crate::config::Configuration;
use crate::error::{AnalysisError, InputError};
use crate::render::{render_svg, RenderSpec};
use crate::sim::{run, RunConfig, SimError, Summary, Trace};
use crate::verify::{verify, VerifyOptions, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("illegal input: {0}")]
    Illegal(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("check failed: {0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::Illegal(_) => 2,
            CliError::Failed(_) => 4,
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        match e {
            InputError::Analysis(a) => a.into(),
            InputError::Io(io) => CliError::Io(io),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvariantViolation(_) => CliError::Failed(e.to_string()),
            other => CliError::Illegal(other.to_string()),
        }
    }
}

/// Analysis report of a configuration file, as pretty JSON.
pub fn cmd_analyze(config_path: &Path) -> Result<String, CliError> {
    let config = Configuration::from_json(&fs::read_to_string(config_path)?)?;
    config.check_legal_initial()?;
    let report = analyze(&config)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes"))
}

/// Result of `cmd_run`: the summary and the exit code it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub summary: Summary,
    pub exit_code: i32,
}

/// Run a simulation. The trace (partial when the event limit is hit) goes
/// to `trace_path`, the SVG to `render`.
pub fn cmd_run(
    run_config_path: &Path,
    trace_path: Option<&Path>,
    render: Option<(&Path, &RenderSpec)>,
) -> Result<RunOutput, CliError> {
    let cfg = RunConfig::from_json(&fs::read_to_string(run_config_path)?)?;
    let (trace, limit_hit) = match run(&cfg) {
        Ok(t) => (t, false),
        Err(SimError::LimitExceeded(t)) => (*t, true),
        Err(
            e @ (SimError::IllegalInitial(_)
            | SimError::ScriptViolation(_)
            | SimError::InvalidPolicy(_)),
        ) => return Err(CliError::Illegal(e.to_string())),
        Err(e) => return Err(CliError::Failed(e.to_string())),
    };
    write_outputs(&trace, trace_path, render)?;
    let exit_code = if limit_hit {
        3
    } else if trace.summary.gathered {
        0
    } else {
        4
    };
    Ok(RunOutput {
        summary: trace.summary,
        exit_code,
    })
}

fn write_outputs(
    trace: &Trace,
    trace_path: Option<&Path>,
    render: Option<(&Path, &RenderSpec)>,
) -> Result<(), CliError> {
    if let Some(p) = trace_path {
        fs::write(p, trace.to_jsonl())?;
    }
    if let Some((p, spec)) = render {
        fs::write(p, render_svg(trace, spec))?;
    }
    Ok(())
}

/// Render an existing JSONL trace. The trace file is only read.
pub fn cmd_render(trace_path: &Path, out: &Path, spec: &RenderSpec) -> Result<(), CliError> {
    let trace = Trace::from_jsonl(&fs::read_to_string(trace_path)?)?;
    fs::write(out, render_svg(&trace, spec))?;
    Ok(())
}

/// Run the verification suite; the report is returned even when it fails.
pub fn cmd_verify(options: &VerifyOptions) -> (VerifyReport, i32) {
    let report = verify(options);
    let code = if report.passed { 0 } else { 4 };
    (report, code)
}

/// Parse `"3..8"`, `"3..=8"` or `"5"` into an inclusive range.
pub fn parse_n_range(s: &str) -> Result<(usize, usize), String> {
    let bad = || format!("expected N or A..B, got {s:?}");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo < 2 || hi < lo {
        return Err(bad());
    }
    Ok((lo, hi))
}
