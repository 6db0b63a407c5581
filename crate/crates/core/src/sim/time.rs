use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::SimError;
use crate::angle::{format_rational, parse_rational, Angle};
use crate::config::RobotId;
use crate::error::ParseRationalError;
use crate::protocol::{Direction, MoveCommand, RobotMemory};

/// Non-negative exact simulation time. Robots move one turn per time unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimTime(BigRational);

impl SimTime {
    pub fn zero() -> Self {
        SimTime(BigRational::zero())
    }

    pub fn new(num: i64, den: i64) -> Self {
        SimTime::from_rational(BigRational::new(num.into(), den.into())).expect("non-negative time")
    }

    pub fn from_rational(r: BigRational) -> Option<Self> {
        (!r.is_negative()).then_some(SimTime(r))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `self - earlier`, which must not be negative.
    pub fn since(&self, earlier: &SimTime) -> BigRational {
        &self.0 - &earlier.0
    }
}

impl Add<&BigRational> for &SimTime {
    type Output = SimTime;
    fn add(self, d: &BigRational) -> SimTime {
        SimTime::from_rational(&self.0 + d).expect("time moves forward")
    }
}

impl Add<&SimTime> for &SimTime {
    type Output = SimTime;
    fn add(self, d: &SimTime) -> SimTime {
        SimTime(&self.0 + &d.0)
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl fmt::Debug for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={self}")
    }
}

impl FromStr for SimTime {
    type Err = ParseRationalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = parse_rational(s)?;
        SimTime::from_rational(r).ok_or_else(|| ParseRationalError(s.to_string()))
    }
}

impl Serialize for SimTime {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SimTime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Idle,
    LookingComputing,
    Moving,
}

/// A move in progress. `end - start` equals the commanded amount.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendingMove {
    pub command: MoveCommand,
    pub from: Angle,
    pub start: SimTime,
    pub end: SimTime,
}

impl PendingMove {
    pub fn new(command: MoveCommand, from: Angle, start: SimTime) -> Self {
        let end = &start + command.amount.as_rational();
        PendingMove {
            command,
            from,
            start,
            end,
        }
    }

    pub fn destination(&self) -> Angle {
        self.command.destination(&self.from)
    }

    /// Strictly between start and end.
    pub fn in_flight(&self, t: &SimTime) -> bool {
        &self.start < t && t < &self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobotRuntime {
    pub id: RobotId,
    /// Position when idle, or the start of the current move.
    pub anchor: Angle,
    pub memory: RobotMemory,
    pub phase: Phase,
    pub pending: Option<PendingMove>,
}

impl RobotRuntime {
    pub fn new(id: RobotId, pos: Angle) -> Self {
        RobotRuntime {
            id,
            anchor: pos,
            memory: RobotMemory::Off,
            phase: Phase::Idle,
            pending: None,
        }
    }

    pub fn is_moving(&self) -> bool {
        self.pending.is_some()
    }

    /// Exact position at `t`. A moving robot is only defined over its
    /// current move interval.
    pub fn position_at(&self, t: &SimTime) -> Result<Angle, SimError> {
        let Some(m) = &self.pending else {
            return Ok(self.anchor.clone());
        };
        if t < &m.start || t > &m.end {
            return Err(SimError::TimeOutOfRange(t.clone()));
        }
        let travelled = Angle::from_rational(t.since(&m.start));
        Ok(match m.command.direction {
            Direction::Clockwise => &m.from + &travelled,
            Direction::Counterclockwise => &m.from - &travelled,
            Direction::None => m.from.clone(),
        })
    }
}
