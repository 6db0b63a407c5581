//! Robot configurations and their JSON ingestion format.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis;
use crate::angle::Angle;
use crate::error::{AnalysisError, InputError};

/// Simulator-side identity. The analysis never reads it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RobotId(pub String);

impl RobotId {
    pub fn new(s: impl Into<String>) -> Self {
        RobotId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for RobotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Robot {
    pub id: RobotId,
    pub pos: Angle,
}

/// A finite multiset of robot positions; coinciding positions form a
/// multiplicity point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ConfigurationDoc", into = "ConfigurationDoc")]
pub struct Configuration {
    robots: Vec<Robot>,
}

#[derive(Serialize, Deserialize)]
struct ConfigurationDoc {
    robots: Vec<Robot>,
}

impl TryFrom<ConfigurationDoc> for Configuration {
    type Error = AnalysisError;
    fn try_from(doc: ConfigurationDoc) -> Result<Self, Self::Error> {
        Configuration::new(doc.robots)
    }
}

impl From<Configuration> for ConfigurationDoc {
    fn from(c: Configuration) -> Self {
        ConfigurationDoc { robots: c.robots }
    }
}

impl Configuration {
    /// Rejects empty input and duplicate ids; positions may coincide.
    pub fn new(robots: Vec<Robot>) -> Result<Self, AnalysisError> {
        if robots.is_empty() {
            return Err(AnalysisError::EmptyConfiguration);
        }
        let mut seen = BTreeSet::new();
        for r in &robots {
            if !seen.insert(&r.id) {
                return Err(AnalysisError::DuplicateRobot(r.id.0.clone()));
            }
        }
        Ok(Configuration { robots })
    }

    /// Robots named `r0, r1, ...` in input order.
    pub fn from_positions<I: IntoIterator<Item = Angle>>(
        positions: I,
    ) -> Result<Self, AnalysisError> {
        let robots = positions
            .into_iter()
            .enumerate()
            .map(|(i, pos)| Robot {
                id: RobotId(format!("r{i}")),
                pos,
            })
            .collect();
        Configuration::new(robots)
    }

    /// Shorthand for tests and examples: `from_fractions(20, &[0, 2, 9, 14])`.
    pub fn from_fractions(denominator: i64, numerators: &[i64]) -> Result<Self, AnalysisError> {
        Configuration::from_positions(numerators.iter().map(|&n| Angle::new(n, denominator)))
    }

    pub fn robots(&self) -> &[Robot] {
        &self.robots
    }

    pub fn len(&self) -> usize {
        self.robots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.robots.is_empty()
    }

    pub fn positions(&self) -> Vec<Angle> {
        self.robots.iter().map(|r| r.pos.clone()).collect()
    }

    pub fn robot(&self, id: &RobotId) -> Option<&Robot> {
        self.robots.iter().find(|r| &r.id == id)
    }

    pub fn id_at(&self, pos: &Angle) -> Option<&RobotId> {
        self.robots.iter().find(|r| &r.pos == pos).map(|r| &r.id)
    }

    pub fn has_multiplicity(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.robots.iter().any(|r| !seen.insert(&r.pos))
    }

    pub fn is_occupied(&self, pos: &Angle) -> bool {
        self.robots.iter().any(|r| &r.pos == pos)
    }

    /// The same robots rotated clockwise by `by`.
    pub fn rotated(&self, by: &Angle) -> Configuration {
        Configuration {
            robots: self
                .robots
                .iter()
                .map(|r| Robot {
                    id: r.id.clone(),
                    pos: &r.pos + by,
                })
                .collect(),
        }
    }

    /// A copy with one extra robot.
    pub fn with_robot(&self, id: RobotId, pos: Angle) -> Result<Configuration, AnalysisError> {
        let mut robots = self.robots.clone();
        robots.push(Robot { id, pos });
        Configuration::new(robots)
    }

    /// Initial configurations must be multiplicity-free and rotationally
    /// asymmetric.
    pub fn check_legal_initial(&self) -> Result<(), AnalysisError> {
        if self.has_multiplicity() {
            return Err(AnalysisError::MultiplicityPresent);
        }
        if analysis::is_rotationally_symmetric(self)? {
            return Err(AnalysisError::SymmetricConfiguration);
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, InputError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}
