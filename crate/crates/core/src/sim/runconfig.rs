use serde::{Deserialize, Serialize};

use super::policy::PolicySpec;
use super::time::SimTime;
use crate::config::Configuration;
use crate::error::InputError;
use crate::protocol::MultiplicityThreshold;

/// Everything a run needs; the JSON form is the input of `gather-sim run`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub initial: Configuration,
    pub policy: PolicySpec,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub options: RunOptions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum number of trace records, excluding the summary.
    #[serde(default = "default_max_events")]
    pub max_events: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_time: Option<SimTime>,
}

fn default_max_events() -> usize {
    100_000
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_events: default_max_events(),
            max_time: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunOptions {
    #[serde(default)]
    pub multiplicity_threshold: MultiplicityThreshold,
    /// Robots strictly inside a move do not count towards multiplicity
    /// flags in other robots' snapshots.
    #[serde(default)]
    pub strict_transient_multiplicity: bool,
    /// Re-run the leader analysis on every multiplicity-free snapshot
    /// instant and abort if the expected-leader count leaves {1, 2}.
    #[serde(default = "yes")]
    pub check_invariants: bool,
}

fn yes() -> bool {
    true
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            multiplicity_threshold: MultiplicityThreshold::default(),
            strict_transient_multiplicity: false,
            check_invariants: true,
        }
    }
}

impl RunConfig {
    pub fn new(initial: Configuration, policy: PolicySpec) -> Self {
        RunConfig {
            initial,
            policy,
            limits: Limits::default(),
            options: RunOptions::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run config serializes")
    }
}
