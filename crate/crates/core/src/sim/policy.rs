//! Activation schedulers.
//!
//! A scheduler hands the engine one activation at a time, in
//! non-decreasing `(time, robot)` order. Each activation fixes the look
//! instant and the look+compute duration; the move then runs at unit speed
//! from the decision instant.

use std::fmt;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::time::SimTime;
use super::{Engine, SimError};
use crate::config::RobotId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    Fsync,
    Ssync,
    AsyncRandom,
    Scripted,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Fsync => "fsync",
            PolicyKind::Ssync => "ssync",
            PolicyKind::AsyncRandom => "async-random",
            PolicyKind::Scripted => "scripted",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One scripted activation: `robot` looks at `t` and decides at `t + lc`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptedActivation {
    pub robot: RobotId,
    pub t: SimTime,
    pub lc: SimTime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    #[serde(default)]
    pub seed: u64,
    /// Every robot is activated at least once in any window of this many
    /// consecutive activations. Defaults to three times the robot count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fairness_window: Option<usize>,
    /// Random durations are multiples of `1 / delay_denominator_bound`.
    #[serde(default = "default_delay_bound")]
    pub delay_denominator_bound: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub script: Vec<ScriptedActivation>,
}

fn default_delay_bound() -> u64 {
    8
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, seed: u64) -> Self {
        PolicySpec {
            kind,
            seed,
            fairness_window: None,
            delay_denominator_bound: default_delay_bound(),
            script: Vec::new(),
        }
    }

    pub fn fsync() -> Self {
        PolicySpec::new(PolicyKind::Fsync, 0)
    }

    pub fn ssync(seed: u64) -> Self {
        PolicySpec::new(PolicyKind::Ssync, seed)
    }

    pub fn async_random(seed: u64) -> Self {
        PolicySpec::new(PolicyKind::AsyncRandom, seed)
    }

    pub fn scripted(script: Vec<ScriptedActivation>) -> Self {
        PolicySpec {
            script,
            ..PolicySpec::new(PolicyKind::Scripted, 0)
        }
    }

    pub fn window_for(&self, n: usize) -> usize {
        self.fairness_window.unwrap_or(3 * n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Activation {
    pub robot: usize,
    pub t: SimTime,
    pub lc: SimTime,
}

pub(crate) trait Scheduler {
    /// `None` ends the run.
    fn next(&mut self, engine: &mut Engine) -> Result<Option<Activation>, SimError>;
}

pub(crate) fn build(spec: &PolicySpec, ids: &[RobotId]) -> Result<Box<dyn Scheduler>, SimError> {
    let n = ids.len();
    let window = spec.window_for(n);
    if spec.kind != PolicyKind::Scripted && window < n {
        return Err(SimError::InvalidPolicy(format!(
            "fairness window {window} is smaller than {n} robots"
        )));
    }
    if spec.delay_denominator_bound == 0 {
        return Err(SimError::InvalidPolicy(
            "delay_denominator_bound must be positive".into(),
        ));
    }
    Ok(match spec.kind {
        PolicyKind::Fsync => Box::new(Rounds::new(n, window, None)),
        PolicyKind::Ssync => Box::new(Rounds::new(
            n,
            window,
            Some(ChaCha8Rng::seed_from_u64(spec.seed)),
        )),
        PolicyKind::AsyncRandom => Box::new(AsyncRandom::new(
            n,
            window,
            spec.seed,
            spec.delay_denominator_bound,
        )),
        PolicyKind::Scripted => Box::new(Scripted::new(&spec.script, ids)?),
    })
}

/// Synchronous rounds two time units apart. Everyone activated looks at the
/// round start and decides half a unit later, so every move (shorter than
/// half a turn) ends well before the next round.
struct Rounds {
    n: usize,
    /// Maximum number of rounds a robot may sit out in a row, plus one.
    max_gap: usize,
    rng: Option<ChaCha8Rng>,
    round: usize,
    members: Vec<usize>,
    cursor: usize,
    last_round: Vec<Option<usize>>,
}

impl Rounds {
    fn new(n: usize, window: usize, rng: Option<ChaCha8Rng>) -> Self {
        // activations strictly between two of x's are at most (gap+1)*n - 2
        let max_gap = ((window + 1) / n).saturating_sub(1);
        Rounds {
            n,
            max_gap,
            rng,
            round: 0,
            members: Vec::new(),
            cursor: 0,
            last_round: vec![None; n],
        }
    }

    fn pick_members(&mut self) {
        let round = self.round;
        let Some(rng) = self.rng.as_mut() else {
            self.members = (0..self.n).collect();
            return;
        };
        if self.max_gap < 1 {
            self.members = (0..self.n).collect();
            return;
        }
        let max_gap = self.max_gap;
        let mut members: Vec<usize> = (0..self.n)
            .filter(|&x| {
                let waited = match self.last_round[x] {
                    Some(r) => round - r,
                    None => round + 1,
                };
                waited >= max_gap || rng.gen_bool(0.5)
            })
            .collect();
        if members.is_empty() {
            members.push(rng.gen_range(0..self.n));
        }
        self.members = members;
    }
}

impl Scheduler for Rounds {
    fn next(&mut self, _engine: &mut Engine) -> Result<Option<Activation>, SimError> {
        if self.cursor == self.members.len() {
            if !self.members.is_empty() {
                self.round += 1;
            }
            self.pick_members();
            self.cursor = 0;
        }
        let robot = self.members[self.cursor];
        self.cursor += 1;
        self.last_round[robot] = Some(self.round);
        let t = SimTime::new(2 * self.round as i64, 1);
        Ok(Some(Activation {
            robot,
            t,
            lc: SimTime::new(1, 2),
        }))
    }
}

/// Fully asynchronous activations with random idle gaps and look+compute
/// durations. The next robot is drawn uniformly unless that would make some
/// fairness deadline unreachable, in which case the robot with the earliest
/// deadline goes.
struct AsyncRandom {
    window: usize,
    rng: ChaCha8Rng,
    den: u64,
    count: usize,
    last_index: Vec<Option<usize>>,
    last_time: SimTime,
}

impl AsyncRandom {
    fn new(n: usize, window: usize, seed: u64, den: u64) -> Self {
        AsyncRandom {
            window,
            rng: ChaCha8Rng::seed_from_u64(seed),
            den,
            count: 0,
            last_index: vec![None; n],
            last_time: SimTime::zero(),
        }
    }

    /// Index of the last activation slot robot `x` may take.
    fn deadline(&self, x: usize) -> usize {
        match self.last_index[x] {
            Some(i) => i + self.window,
            None => self.window - 1,
        }
    }

    fn feasible_without(&self, chosen: usize) -> bool {
        let mut deadlines: Vec<usize> = (0..self.last_index.len())
            .filter(|&y| y != chosen)
            .map(|y| self.deadline(y))
            .collect();
        deadlines.sort_unstable();
        deadlines
            .iter()
            .enumerate()
            .all(|(k, &d)| d > self.count + k)
    }

    fn pick(&mut self) -> usize {
        let n = self.last_index.len();
        let candidate = self.rng.gen_range(0..n);
        if self.deadline(candidate) >= self.count && self.feasible_without(candidate) {
            return candidate;
        }
        (0..n)
            .min_by_key(|&y| (self.deadline(y), y))
            .expect("at least one robot")
    }

    fn duration(&mut self) -> BigRational {
        let k = self.rng.gen_range(1..=self.den);
        BigRational::new(k.into(), self.den.into())
    }
}

impl Scheduler for AsyncRandom {
    fn next(&mut self, engine: &mut Engine) -> Result<Option<Activation>, SimError> {
        let robot = self.pick();
        engine.settle(robot)?;
        let base = [&self.last_time, &engine.free_at(robot), engine.now()]
            .into_iter()
            .max()
            .cloned()
            .expect("non-empty");
        let gap = self.duration();
        let lc = self.duration();
        let t = &base + &gap;
        self.last_index[robot] = Some(self.count);
        self.count += 1;
        self.last_time = t.clone();
        Ok(Some(Activation {
            robot,
            t,
            lc: SimTime::from_rational(lc).expect("positive"),
        }))
    }
}

struct Scripted {
    queue: std::vec::IntoIter<Activation>,
}

impl Scripted {
    fn new(script: &[ScriptedActivation], ids: &[RobotId]) -> Result<Self, SimError> {
        let mut acts = Vec::with_capacity(script.len());
        for (i, s) in script.iter().enumerate() {
            let robot = ids.iter().position(|id| id == &s.robot).ok_or_else(|| {
                SimError::ScriptViolation(format!("entry {i}: unknown robot {}", s.robot))
            })?;
            if s.lc == SimTime::zero() {
                return Err(SimError::ScriptViolation(format!(
                    "entry {i}: look+compute duration must be positive"
                )));
            }
            acts.push(Activation {
                robot,
                t: s.t.clone(),
                lc: s.lc.clone(),
            });
        }
        let mut last: Vec<Option<&SimTime>> = vec![None; ids.len()];
        for (i, a) in acts.iter().enumerate() {
            if last[a.robot].is_some_and(|prev| &a.t <= prev) {
                return Err(SimError::ScriptViolation(format!(
                    "entry {i}: activation times of {} are not increasing",
                    ids[a.robot]
                )));
            }
            last[a.robot] = Some(&a.t);
        }
        acts.sort_by(|a, b| (&a.t, a.robot).cmp(&(&b.t, b.robot)));
        Ok(Scripted {
            queue: acts.into_iter(),
        })
    }
}

impl Scheduler for Scripted {
    fn next(&mut self, _engine: &mut Engine) -> Result<Option<Activation>, SimError> {
        Ok(self.queue.next())
    }
}
