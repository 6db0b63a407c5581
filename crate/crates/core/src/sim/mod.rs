//! Discrete-event simulation of Look-Compute-Move cycles.
//!
//! Every robot runs the same [`Protocol`]. A scheduler chooses when each
//! robot looks and how long it computes; the move then proceeds rigidly at
//! one turn per time unit. Other robots may be observed mid-move. All times
//! and positions are exact rationals, so coincidences are decided exactly.

mod policy;
mod runconfig;
mod time;
mod trace;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use thiserror::Error;

pub use policy::{PolicyKind, PolicySpec, ScriptedActivation};
pub use runconfig::{Limits, RunConfig, RunOptions};
pub use time::{PendingMove, Phase, RobotRuntime, SimTime};
pub use trace::{Countermove, Event, EventKind, Outcome, Summary, Trace, TraceRecord};

use crate::analysis::{classify_all, is_rotationally_symmetric, Snapshot};
use crate::angle::Angle;
use crate::config::{Configuration, Robot, RobotId};
use crate::error::AnalysisError;
use crate::protocol::{Protocol, RobotMemory};
use policy::Activation;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("event limit exceeded after {} records", .0.records.len())]
    LimitExceeded(Box<Trace>),
    #[error("time {0} is outside the current move")]
    TimeOutOfRange(SimTime),
    #[error("robot {0} cannot look while moving")]
    ObserverMoving(RobotId),
    #[error("invalid schedule: {0}")]
    ScriptViolation(String),
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("invariant violated at t={t}: {message}")]
    InvariantViolation { t: SimTime, message: String },
    #[error("illegal initial configuration: {0}")]
    IllegalInitial(AnalysisError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// All robots, ordered by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    robots: Vec<RobotRuntime>,
}

impl World {
    pub fn new(config: &Configuration) -> World {
        let mut robots: Vec<RobotRuntime> = config
            .robots()
            .iter()
            .map(|r| RobotRuntime::new(r.id.clone(), r.pos.clone()))
            .collect();
        robots.sort_by(|a, b| a.id.cmp(&b.id));
        World { robots }
    }

    pub fn robots(&self) -> &[RobotRuntime] {
        &self.robots
    }

    pub fn index_of(&self, id: &RobotId) -> Option<usize> {
        self.robots.binary_search_by(|r| r.id.cmp(id)).ok()
    }

    pub fn positions_at(&self, t: &SimTime) -> Result<Vec<Angle>, SimError> {
        self.robots.iter().map(|r| r.position_at(t)).collect()
    }

    pub fn configuration_at(&self, t: &SimTime) -> Result<Configuration, SimError> {
        let robots = self
            .robots
            .iter()
            .map(|r| {
                Ok(Robot {
                    id: r.id.clone(),
                    pos: r.position_at(t)?,
                })
            })
            .collect::<Result<Vec<_>, SimError>>()?;
        Ok(Configuration::new(robots)?)
    }

    /// Ground-truth coincidence groups of two or more robots, moving or not.
    pub fn multiplicity_points(&self, t: &SimTime) -> Result<Vec<(Angle, usize)>, SimError> {
        let mut counts: BTreeMap<Angle, usize> = BTreeMap::new();
        for p in self.positions_at(t)? {
            *counts.entry(p).or_default() += 1;
        }
        Ok(counts.into_iter().filter(|(_, c)| *c >= 2).collect())
    }

    /// Coincidence groups among robots that are not strictly inside a move.
    /// A pair travelling together is a group above but not here.
    pub fn resting_multiplicity_points(
        &self,
        t: &SimTime,
    ) -> Result<Vec<(Angle, usize)>, SimError> {
        let mut counts: BTreeMap<Angle, usize> = BTreeMap::new();
        for r in &self.robots {
            if !r.pending.as_ref().is_some_and(|m| m.in_flight(t)) {
                *counts.entry(r.position_at(t)?).or_default() += 1;
            }
        }
        Ok(counts.into_iter().filter(|(_, c)| *c >= 2).collect())
    }

    /// All robots at one point and none moving.
    pub fn is_gathered(&self, t: &SimTime) -> Result<bool, SimError> {
        if self.robots.iter().any(|r| r.is_moving()) {
            return Ok(false);
        }
        let ps = self.positions_at(t)?;
        Ok(ps.windows(2).all(|w| w[0] == w[1]))
    }

    /// What robot `observer` sees at `t`. With `strict`, robots strictly
    /// inside a move are visible but never make a point a multiplicity.
    pub fn snapshot(
        &self,
        observer: usize,
        t: &SimTime,
        strict: bool,
    ) -> Result<Snapshot, SimError> {
        let me = &self.robots[observer];
        if me.is_moving() {
            return Err(SimError::ObserverMoving(me.id.clone()));
        }
        let here = me.position_at(t)?;
        let mut others = Vec::with_capacity(self.robots.len());
        for (i, r) in self.robots.iter().enumerate() {
            if i == observer {
                continue;
            }
            let counts = !(strict && r.pending.as_ref().is_some_and(|m| m.in_flight(t)));
            others.push((r.position_at(t)?, counts));
        }
        Ok(Snapshot::observe(
            &here,
            others.iter().map(|(p, c)| (p, *c)),
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum QueuedKind {
    MoveEnd,
    Activate(SimTime),
    Decide,
}

type QueueKey = (SimTime, usize, QueuedKind);

pub(crate) struct Engine<'a> {
    cfg: &'a RunConfig,
    world: World,
    protocol: Protocol,
    queue: BTreeSet<QueueKey>,
    now: SimTime,
    last_key: Option<(SimTime, usize)>,
    records: Vec<TraceRecord>,
    pending_snapshot: Vec<Option<(SimTime, Snapshot)>>,
    free_at: Vec<SimTime>,
    probe_theta: Vec<Option<BigRational>>,
    warnings: Vec<String>,
    max_mult: usize,
    max_resting_mult: usize,
    first_mult: Option<SimTime>,
    window: usize,
    gathered_since: Option<SimTime>,
    decided_since_gather: Vec<bool>,
    gathered_decisions: usize,
    quiescent: bool,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a RunConfig) -> Self {
        let world = World::new(&cfg.initial);
        let n = world.robots.len();
        Engine {
            cfg,
            world,
            protocol: Protocol::new(cfg.options.multiplicity_threshold),
            queue: BTreeSet::new(),
            now: SimTime::zero(),
            last_key: None,
            records: Vec::new(),
            pending_snapshot: vec![None; n],
            free_at: vec![SimTime::zero(); n],
            probe_theta: vec![None; n],
            warnings: Vec::new(),
            max_mult: 0,
            max_resting_mult: 0,
            first_mult: None,
            window: cfg.policy.window_for(n),
            gathered_since: None,
            decided_since_gather: vec![false; n],
            gathered_decisions: 0,
            quiescent: false,
        }
    }

    pub(crate) fn now(&self) -> &SimTime {
        &self.now
    }

    /// Earliest time robot `x` can look again; `x` must not be computing.
    pub(crate) fn free_at(&self, x: usize) -> SimTime {
        match &self.world.robots[x].pending {
            Some(m) => m.end.clone(),
            None => self.free_at[x].clone(),
        }
    }

    /// Process events until robot `x` has decided its current cycle.
    pub(crate) fn settle(&mut self, x: usize) -> Result<(), SimError> {
        while !self.quiescent && self.has_undecided_cycle(x) {
            self.step()?;
        }
        Ok(())
    }

    fn has_undecided_cycle(&self, x: usize) -> bool {
        self.queue
            .iter()
            .any(|(_, r, k)| *r == x && !matches!(k, QueuedKind::MoveEnd))
    }

    fn step(&mut self) -> Result<(), SimError> {
        let key = self.queue.pop_first().expect("step with an empty queue");
        self.process(key)
    }

    /// Process every queued event ordered before `key`.
    fn run_before(&mut self, key: &QueueKey) -> Result<(), SimError> {
        while !self.quiescent && self.queue.first().is_some_and(|k| k < key) {
            self.step()?;
        }
        Ok(())
    }

    fn drain(&mut self) -> Result<(), SimError> {
        while !self.quiescent && !self.queue.is_empty() {
            self.step()?;
        }
        Ok(())
    }

    fn schedule(&mut self, act: Activation) -> Result<(), SimError> {
        let Activation { robot, t, lc } = act;
        if self
            .last_key
            .as_ref()
            .is_some_and(|(lt, lr)| (&t, robot) <= (lt, *lr))
            || t < self.now
        {
            return Err(SimError::ScriptViolation(format!(
                "activation of {} at {t} is not after the previous one",
                self.world.robots[robot].id
            )));
        }
        let key = (t.clone(), robot, QueuedKind::Activate(lc));
        self.run_before(&key)?;
        if self.quiescent {
            return Ok(());
        }
        let r = &self.world.robots[robot];
        if r.phase != Phase::Idle || self.has_undecided_cycle(robot) {
            return Err(SimError::ScriptViolation(format!(
                "{} is activated at {t} before finishing its cycle",
                r.id
            )));
        }
        self.last_key = Some((t, robot));
        self.queue.insert(key);
        self.step()
    }

    fn record(&mut self, robot: usize, event: Event) -> Result<(), SimError> {
        if self.records.len() >= self.cfg.limits.max_events {
            return Err(SimError::LimitExceeded(Box::new(
                self.trace(Outcome::LimitExceeded),
            )));
        }
        let id = self.world.robots[robot].id.clone();
        self.records.push(TraceRecord {
            t: self.now.clone(),
            robot: id,
            event,
        });
        Ok(())
    }

    fn process(&mut self, (t, x, kind): QueueKey) -> Result<(), SimError> {
        if self.cfg.limits.max_time.as_ref().is_some_and(|m| &t > m) {
            return Err(SimError::LimitExceeded(Box::new(
                self.trace(Outcome::LimitExceeded),
            )));
        }
        self.now = t;
        match kind {
            QueuedKind::Activate(lc) => self.activate(x, lc)?,
            QueuedKind::Decide => self.decide(x)?,
            QueuedKind::MoveEnd => self.finish_move(x)?,
        }
        self.observe_world()
    }

    fn activate(&mut self, x: usize, lc: SimTime) -> Result<(), SimError> {
        let now = self.now.clone();
        let r = &self.world.robots[x];
        let event = Event::Activate {
            position: r.position_at(&now)?,
            memory: r.memory,
        };
        self.record(x, event)?;
        self.world.robots[x].phase = Phase::LookingComputing;
        let snap = self
            .world
            .snapshot(x, &now, self.cfg.options.strict_transient_multiplicity)?;
        self.record(x, Event::Snapshot(snap.clone()))?;
        if self.cfg.options.check_invariants {
            self.check_expected_leaders()?;
        }
        self.pending_snapshot[x] = Some((now.clone(), snap));
        self.queue.insert((&now + &lc, x, QueuedKind::Decide));
        Ok(())
    }

    fn decide(&mut self, x: usize) -> Result<(), SimError> {
        let now = self.now.clone();
        let (looked_at, snap) = self.pending_snapshot[x]
            .take()
            .expect("decide follows a snapshot");
        let from = self.world.robots[x].memory;
        let decision = self.protocol.decide(&snap, from)?;
        let changes_state = decision.memory != from;
        if changes_state && !from.is_legal_transition(decision.memory) {
            return Err(SimError::InvariantViolation {
                t: now,
                message: format!(
                    "illegal transition {} -> {}",
                    from.name(),
                    decision.memory.name()
                ),
            });
        }
        self.track_theta(x, from, &decision);
        let command = decision.command.clone();
        let r = &mut self.world.robots[x];
        r.memory = decision.memory;
        self.record(x, Event::Decide { from, decision })?;
        if self
            .gathered_since
            .as_ref()
            .is_some_and(|g| &looked_at >= g)
        {
            self.decided_since_gather[x] = true;
            self.gathered_decisions += 1;
        }
        let r = &mut self.world.robots[x];
        if command.is_move() {
            let m = PendingMove::new(command.clone(), r.anchor.clone(), now.clone());
            let (from_pos, to, end) = (m.from.clone(), m.destination(), m.end.clone());
            r.pending = Some(m);
            r.phase = Phase::Moving;
            self.queue.insert((end.clone(), x, QueuedKind::MoveEnd));
            self.record(
                x,
                Event::MoveStart {
                    from: from_pos,
                    to,
                    command,
                    end,
                },
            )?;
        } else {
            r.phase = Phase::Idle;
            self.free_at[x] = now;
        }
        Ok(())
    }

    fn finish_move(&mut self, x: usize) -> Result<(), SimError> {
        let r = &mut self.world.robots[x];
        let m = r.pending.take().expect("move-end follows move-start");
        r.anchor = m.destination();
        r.phase = Phase::Idle;
        self.free_at[x] = self.now.clone();
        let position = r.anchor.clone();
        self.record(x, Event::MoveEnd { position })
    }

    /// Warn when a probing robot reads a different `theta` than the one it
    /// started with; robots cannot remember it, the simulator can.
    fn track_theta(&mut self, x: usize, from: RobotMemory, d: &crate::protocol::Decision) {
        match (from, d.memory) {
            (RobotMemory::Off, RobotMemory::MoveHalf) => self.probe_theta[x] = d.theta.clone(),
            (RobotMemory::MoveHalf | RobotMemory::MoveMore, _)
                if !d.branch.is_multiplicity_phase() =>
            {
                if let (Some(old), Some(new)) = (&self.probe_theta[x], &d.theta) {
                    if old != new {
                        self.warnings.push(format!(
                            "{} at t={} recovered theta {} but started its probe with {}",
                            self.world.robots[x].id,
                            self.now,
                            crate::angle::format_rational(new),
                            crate::angle::format_rational(old)
                        ));
                    }
                }
            }
            _ => {}
        }
        if matches!(d.memory, RobotMemory::Off | RobotMemory::Terminate) {
            self.probe_theta[x] = None;
        }
    }

    fn check_expected_leaders(&self) -> Result<(), SimError> {
        let config = self.world.configuration_at(&self.now)?;
        if config.has_multiplicity() || is_rotationally_symmetric(&config)? {
            return Ok(());
        }
        let verdicts = classify_all(&config)?;
        let expected = verdicts
            .iter()
            .filter(|v| v.tag.is_expected_leader())
            .count();
        if !(1..=2).contains(&expected) {
            return Err(SimError::InvariantViolation {
                t: self.now.clone(),
                message: format!("{expected} expected leaders"),
            });
        }
        Ok(())
    }

    fn observe_world(&mut self) -> Result<(), SimError> {
        let mult = self.world.multiplicity_points(&self.now)?.len();
        self.max_mult = self.max_mult.max(mult);
        let resting = self.world.resting_multiplicity_points(&self.now)?.len();
        self.max_resting_mult = self.max_resting_mult.max(resting);
        if mult > 0 && self.first_mult.is_none() {
            self.first_mult = Some(self.now.clone());
        }
        if self.world.is_gathered(&self.now)? {
            if self.gathered_since.is_none() {
                self.gathered_since = Some(self.now.clone());
                let n = self.world.robots.len();
                self.decided_since_gather = vec![false; n];
                self.gathered_decisions = 0;
            }
        } else {
            self.gathered_since = None;
        }
        self.quiescent = match &self.gathered_since {
            Some(g) => {
                self.gathered_decisions >= self.window
                    && self.decided_since_gather.iter().all(|&d| d)
                    && self.pending_snapshot.iter().flatten().all(|(t, _)| t >= g)
            }
            None => false,
        };
        Ok(())
    }

    fn trace(&self, outcome: Outcome) -> Trace {
        let gathered = self.world.is_gathered(&self.now).unwrap_or(false);
        let gather_point = if gathered {
            self.world.robots.first().map(|r| r.anchor.clone())
        } else {
            None
        };
        Trace {
            records: self.records.clone(),
            summary: Summary {
                outcome,
                gathered,
                gather_point,
                event_count: self.records.len(),
                max_simultaneous_multiplicities: self.max_mult,
                max_resting_multiplicities: self.max_resting_mult,
                first_multiplicity_time: self.first_mult.clone(),
                final_time: self.now.clone(),
                policy: self.cfg.policy.kind,
                initial: self.cfg.initial.clone(),
                warnings: self.warnings.clone(),
            },
        }
    }
}

/// Run a simulation to quiescence, schedule exhaustion or a limit.
pub fn run(cfg: &RunConfig) -> Result<Trace, SimError> {
    cfg.initial
        .check_legal_initial()
        .map_err(SimError::IllegalInitial)?;
    let ids: Vec<RobotId> = World::new(&cfg.initial)
        .robots
        .iter()
        .map(|r| r.id.clone())
        .collect();
    let mut scheduler = policy::build(&cfg.policy, &ids)?;
    let mut engine = Engine::new(cfg);
    engine.observe_world()?;
    if ids.len() == 1 {
        return Ok(engine.trace(Outcome::Gathered));
    }
    loop {
        if engine.quiescent {
            return Ok(engine.trace(Outcome::Gathered));
        }
        match scheduler.next(&mut engine)? {
            Some(act) => engine.schedule(act)?,
            None => {
                engine.drain()?;
                let outcome = if engine.quiescent {
                    Outcome::Gathered
                } else {
                    Outcome::ScheduleExhausted
                };
                return Ok(engine.trace(outcome));
            }
        }
    }
}
