use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::policy::PolicyKind;
use super::time::{PendingMove, SimTime};
use crate::analysis::Snapshot;
use crate::angle::Angle;
use crate::config::{Configuration, RobotId};
use crate::error::InputError;
use crate::protocol::{Decision, Direction, MoveCommand, RobotMemory};

/// Record kinds in tie-break order: at equal time and robot, a move ends
/// before the next cycle starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    MoveEnd,
    Activate,
    Snapshot,
    Decide,
    MoveStart,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum Event {
    MoveEnd {
        position: Angle,
    },
    Activate {
        position: Angle,
        memory: RobotMemory,
    },
    Snapshot(Snapshot),
    Decide {
        from: RobotMemory,
        decision: Decision,
    },
    MoveStart {
        from: Angle,
        to: Angle,
        command: MoveCommand,
        end: SimTime,
    },
}

impl Event {
    pub fn kind(&self) -> EventKind {
        match self {
            Event::MoveEnd { .. } => EventKind::MoveEnd,
            Event::Activate { .. } => EventKind::Activate,
            Event::Snapshot(_) => EventKind::Snapshot,
            Event::Decide { .. } => EventKind::Decide,
            Event::MoveStart { .. } => EventKind::MoveStart,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t: SimTime,
    pub robot: RobotId,
    #[serde(flatten)]
    pub event: Event,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// Gathered, and every robot has since looked at the gathered world.
    Gathered,
    ScheduleExhausted,
    LimitExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub outcome: Outcome,
    pub gathered: bool,
    pub gather_point: Option<Angle>,
    pub event_count: usize,
    pub max_simultaneous_multiplicities: usize,
    /// The same maximum, ignoring robots strictly inside a move.
    pub max_resting_multiplicities: usize,
    pub first_multiplicity_time: Option<SimTime>,
    pub final_time: SimTime,
    pub policy: PolicyKind,
    pub initial: Configuration,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
enum SummaryLine {
    Summary(Summary),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub records: Vec<TraceRecord>,
    pub summary: Summary,
}

/// A probe that was undone: the robot left `before` in state `off`, and its
/// counter-move brought it to `after`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermove {
    pub robot: RobotId,
    pub from_state: RobotMemory,
    pub before: Angle,
    pub after: Angle,
    pub finished_at: SimTime,
}

impl Countermove {
    pub fn is_exact(&self) -> bool {
        self.before == self.after
    }
}

impl Trace {
    /// One JSON object per line; the last line is the summary.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        let summary = SummaryLine::Summary(self.summary.clone());
        out.push_str(&serde_json::to_string(&summary).expect("summary serializes"));
        out.push('\n');
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Trace, InputError> {
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        let (last, body) = lines
            .split_last()
            .ok_or_else(|| InputError::Invalid("empty trace".into()))?;
        let SummaryLine::Summary(summary) = serde_json::from_str(last)?;
        let records = body
            .iter()
            .map(|l| serde_json::from_str(l))
            .collect::<Result<_, _>>()?;
        Ok(Trace { records, summary })
    }

    pub fn robot_ids(&self) -> Vec<RobotId> {
        self.summary
            .initial
            .robots()
            .iter()
            .map(|r| r.id.clone())
            .collect()
    }

    /// Positions at `t` rebuilt from the initial configuration and the
    /// recorded moves, in initial-configuration order.
    pub fn positions_at(&self, t: &SimTime) -> Vec<(RobotId, Angle)> {
        let mut moves: BTreeMap<&RobotId, Option<PendingMove>> = BTreeMap::new();
        let mut pos: BTreeMap<&RobotId, Angle> = self
            .summary
            .initial
            .robots()
            .iter()
            .map(|r| (&r.id, r.pos.clone()))
            .collect();
        for r in self.records.iter().take_while(|r| &r.t <= t) {
            if let Event::MoveStart { from, command, .. } = &r.event {
                moves.insert(
                    &r.robot,
                    Some(PendingMove::new(command.clone(), from.clone(), r.t.clone())),
                );
            }
        }
        for (id, m) in moves {
            let Some(m) = m else { continue };
            let p = if &m.end <= t {
                m.destination()
            } else {
                let travelled = Angle::from_rational(t.since(&m.start));
                match m.command.direction {
                    Direction::Clockwise => &m.from + &travelled,
                    Direction::Counterclockwise => &m.from - &travelled,
                    Direction::None => m.from.clone(),
                }
            };
            pos.insert(id, p);
        }
        self.summary
            .initial
            .robots()
            .iter()
            .map(|r| (r.id.clone(), pos[&r.id].clone()))
            .collect()
    }

    /// Distinct record times, in order.
    pub fn event_times(&self) -> Vec<SimTime> {
        let mut times: Vec<SimTime> = self.records.iter().map(|r| r.t.clone()).collect();
        times.dedup();
        times
    }

    /// Every completed probe undo: an `off -> moveHalf` decision followed,
    /// without an intervening `off`, by a decision into `terminate` with a
    /// counter-clockwise move.
    pub fn countermoves(&self) -> Vec<Countermove> {
        struct Probe {
            before: Angle,
            undo: Option<RobotMemory>,
        }
        let mut last_pos: BTreeMap<&RobotId, Angle> = BTreeMap::new();
        let mut probes: BTreeMap<&RobotId, Probe> = BTreeMap::new();
        let mut out = Vec::new();
        for r in &self.records {
            match &r.event {
                Event::Activate { position, .. } => {
                    last_pos.insert(&r.robot, position.clone());
                }
                Event::Decide { from, decision } => {
                    let before = last_pos.get(&r.robot).cloned();
                    match (from, decision.memory) {
                        (RobotMemory::Off, RobotMemory::MoveHalf) => {
                            let before = before.expect("decide follows activate");
                            probes.insert(&r.robot, Probe { before, undo: None });
                        }
                        (RobotMemory::MoveHalf | RobotMemory::MoveMore, RobotMemory::Terminate) => {
                            if decision.command.direction == Direction::Counterclockwise {
                                if let Some(p) = probes.get_mut(&r.robot) {
                                    p.undo = Some(*from);
                                }
                            } else {
                                probes.remove(&r.robot);
                            }
                        }
                        (RobotMemory::MoveMore, RobotMemory::Off) => {
                            probes.remove(&r.robot);
                        }
                        // a multiplicity-phase move abandons the probe
                        (a, b) if *a == b && decision.command.is_move() => {
                            probes.remove(&r.robot);
                        }
                        _ => {}
                    }
                }
                Event::MoveEnd { position }
                    if probes.get(&r.robot).is_some_and(|p| p.undo.is_some()) =>
                {
                    let p = probes.remove(&r.robot).expect("present");
                    out.push(Countermove {
                        robot: r.robot.clone(),
                        from_state: p.undo.expect("set"),
                        before: p.before,
                        after: position.clone(),
                        finished_at: r.t.clone(),
                    });
                }
                _ => {}
            }
        }
        out
    }

    /// Structural checks: global record order, per-robot cycle order with a
    /// strictly positive look+compute duration, and rigid moves.
    pub fn validate(&self) -> Result<(), String> {
        let rank: BTreeMap<&RobotId, usize> = {
            let mut ids: Vec<&RobotId> = self
                .summary
                .initial
                .robots()
                .iter()
                .map(|r| &r.id)
                .collect();
            ids.sort();
            ids.into_iter().enumerate().map(|(i, id)| (id, i)).collect()
        };
        let key = |r: &TraceRecord| -> Result<(SimTime, usize, EventKind), String> {
            let i = rank
                .get(&r.robot)
                .ok_or_else(|| format!("unknown robot {}", r.robot))?;
            Ok((r.t.clone(), *i, r.event.kind()))
        };
        for w in self.records.windows(2) {
            if key(&w[0])? > key(&w[1])? {
                return Err(format!("records out of order at t={}", w[1].t));
            }
        }
        #[derive(Clone)]
        enum St {
            Idle,
            Activated(SimTime),
            Looked(SimTime),
            Decided(SimTime, Option<MoveCommand>),
            Moving(PendingMove),
        }
        let mut state: BTreeMap<&RobotId, St> = rank.keys().map(|id| (*id, St::Idle)).collect();
        for r in &self.records {
            let st = state.get_mut(&r.robot).expect("ranked robot");
            let next = match (st.clone(), &r.event) {
                (St::Idle | St::Decided(_, None), Event::Activate { .. }) => {
                    St::Activated(r.t.clone())
                }
                (St::Activated(t), Event::Snapshot(_)) if t == r.t => St::Looked(t),
                (St::Looked(t), Event::Decide { decision, .. }) if r.t > t => {
                    let cmd = decision.command.is_move().then(|| decision.command.clone());
                    St::Decided(r.t.clone(), cmd)
                }
                (
                    St::Decided(t, Some(cmd)),
                    Event::MoveStart {
                        from,
                        to,
                        command,
                        end,
                    },
                ) if t == r.t => {
                    let m = PendingMove::new(command.clone(), from.clone(), r.t.clone());
                    if command != &cmd || &m.destination() != to || &m.end != end {
                        return Err(format!(
                            "{} move-start at {} disagrees with its decision",
                            r.robot, r.t
                        ));
                    }
                    St::Moving(m)
                }
                (St::Moving(m), Event::MoveEnd { position }) => {
                    if m.end != r.t || &m.destination() != position {
                        return Err(format!("{} move ending at {} is not rigid", r.robot, r.t));
                    }
                    St::Idle
                }
                (_, e) => return Err(format!("{} unexpected {:?} at {}", r.robot, e.kind(), r.t)),
            };
            *st = next;
        }
        Ok(())
    }
}
