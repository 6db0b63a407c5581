//! The robot's Compute step: a pure map from (snapshot, memory) to
//! (memory, move).
//!
//! Decision tree, in evaluation order:
//!
//! 1. nothing visible and not standing on a multiplicity point: walk a
//!    quarter turn clockwise;
//! 2. a multiplicity point is visible but the robot is not on one: join it
//!    if it is the first clockwise or counter-clockwise neighbour;
//! 3. the robot stands on a multiplicity point: join another multiplicity
//!    point lying clockwise within the threshold;
//! 4. no multiplicity anywhere: act on the persistent state (`off`,
//!    `moveHalf`, `moveMore`, `terminate`).
//!
//! Memory is consulted only in step 4.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::analysis::{assess, safe_from_assessment, Assessment, LeaderTag, Snapshot};
use crate::angle::{in_arc, Angle, ArcInterval, Closure};
use crate::error::AnalysisError;

/// The robot's entire persistent memory.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "camelCase")]
pub enum RobotMemory {
    #[default]
    Off,
    MoveHalf,
    MoveMore,
    Terminate,
}

impl RobotMemory {
    pub const ALL: [RobotMemory; 4] = [
        RobotMemory::Off,
        RobotMemory::MoveHalf,
        RobotMemory::MoveMore,
        RobotMemory::Terminate,
    ];

    /// Transitions the protocol may take. Self-loops on `moveHalf` and
    /// `moveMore` only happen in the multiplicity branches.
    pub fn is_legal_transition(self, to: RobotMemory) -> bool {
        use RobotMemory::*;
        matches!(
            (self, to),
            (Off, Off)
                | (Off, MoveHalf)
                | (MoveHalf, Terminate)
                | (MoveHalf, MoveMore)
                | (MoveMore, Terminate)
                | (MoveMore, Off)
                | (Terminate, Terminate)
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            RobotMemory::Off => "off",
            RobotMemory::MoveHalf => "moveHalf",
            RobotMemory::MoveMore => "moveMore",
            RobotMemory::Terminate => "terminate",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Clockwise,
    Counterclockwise,
    None,
}

/// Diagnostic label for what a move aims at; kinematics ignore it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    RelativeAngle,
    NeighborPosition,
    MultiplicityPosition,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveCommand {
    pub direction: Direction,
    pub amount: Angle,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_kind: Option<TargetKind>,
}

impl MoveCommand {
    pub fn stay() -> Self {
        MoveCommand {
            direction: Direction::None,
            amount: Angle::zero(),
            target_kind: None,
        }
    }

    /// A zero amount collapses to [`MoveCommand::stay`].
    pub fn clockwise(amount: Angle, kind: TargetKind) -> Self {
        MoveCommand::directed(Direction::Clockwise, amount, kind)
    }

    pub fn counterclockwise(amount: Angle, kind: TargetKind) -> Self {
        MoveCommand::directed(Direction::Counterclockwise, amount, kind)
    }

    fn directed(direction: Direction, amount: Angle, kind: TargetKind) -> Self {
        if amount.is_zero() {
            MoveCommand::stay()
        } else {
            MoveCommand {
                direction,
                amount,
                target_kind: Some(kind),
            }
        }
    }

    pub fn is_move(&self) -> bool {
        self.direction != Direction::None
    }

    /// Where a robot at `from` ends up.
    pub fn destination(&self, from: &Angle) -> Angle {
        match self.direction {
            Direction::Clockwise => from + &self.amount,
            Direction::Counterclockwise => from - &self.amount,
            Direction::None => from.clone(),
        }
    }
}

/// Which clause of the decision tree fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    LoneRobot,
    JoinAdjacentMultiplicity,
    NoAdjacentMultiplicity,
    JoinOtherMultiplicity,
    HoldMultiplicity,
    SureLeaderAdvance,
    ConfusedSafeAdvance,
    ConfusedStartProbe,
    ConfusedYield,
    Follower,
    AmbiguousView,
    HalfNeighborNotAntipodal,
    HalfArcClear,
    HalfArcBlocked,
    MoreNeighborNotAntipodal,
    MoreArcClear,
    MoreArcBlocked,
    Terminated,
}

impl Branch {
    /// Branches in which memory is ignored.
    pub fn is_multiplicity_phase(self) -> bool {
        matches!(
            self,
            Branch::LoneRobot
                | Branch::JoinAdjacentMultiplicity
                | Branch::NoAdjacentMultiplicity
                | Branch::JoinOtherMultiplicity
                | Branch::HoldMultiplicity
        )
    }
}

/// Distance below which a robot on a multiplicity point walks clockwise to
/// another one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MultiplicityThreshold {
    #[serde(rename = "pi/2")]
    HalfPi,
    /// Half a turn. The quarter-turn variant can leave two multiplicity
    /// points stranded more than a quarter turn apart.
    #[default]
    #[serde(rename = "pi")]
    Pi,
}

impl MultiplicityThreshold {
    pub fn as_angle(self) -> Angle {
        match self {
            MultiplicityThreshold::HalfPi => Angle::quarter(),
            MultiplicityThreshold::Pi => Angle::half(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub memory: RobotMemory,
    pub command: MoveCommand,
    pub branch: Branch,
    /// The angle `theta` recovered from the current leading angle in the
    /// `moveHalf` / `moveMore` states, or read directly in `off`.
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::angle::rational_str::option"
    )]
    pub theta: Option<BigRational>,
}

impl Decision {
    fn new(memory: RobotMemory, command: MoveCommand, branch: Branch) -> Self {
        Decision {
            memory,
            command,
            branch,
            theta: None,
        }
    }

    fn with_theta(mut self, theta: BigRational) -> Self {
        self.theta = Some(theta);
        self
    }
}

/// The gathering protocol with its one tunable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Protocol {
    pub threshold: MultiplicityThreshold,
}

/// [`Protocol::decide`] with the default half-turn threshold.
pub fn decide(
    snapshot: &Snapshot,
    memory: RobotMemory,
) -> Result<(RobotMemory, MoveCommand), AnalysisError> {
    let d = Protocol::default().decide(snapshot, memory)?;
    Ok((d.memory, d.command))
}

impl Protocol {
    pub fn new(threshold: MultiplicityThreshold) -> Self {
        Protocol { threshold }
    }

    pub fn decide(
        &self,
        snapshot: &Snapshot,
        memory: RobotMemory,
    ) -> Result<Decision, AnalysisError> {
        if snapshot.is_empty() && !snapshot.self_is_multiplicity() {
            let cmd = MoveCommand::clockwise(Angle::quarter(), TargetKind::RelativeAngle);
            return Ok(Decision::new(memory, cmd, Branch::LoneRobot));
        }
        if snapshot.self_is_multiplicity() {
            return Ok(self.on_multiplicity(snapshot, memory));
        }
        if snapshot.has_multiplicity() {
            return Ok(near_multiplicity(snapshot, memory));
        }
        match memory {
            RobotMemory::Off => decide_off(snapshot),
            RobotMemory::MoveHalf => Ok(decide_move_half(snapshot)),
            RobotMemory::MoveMore => Ok(decide_move_more(snapshot)),
            RobotMemory::Terminate => Ok(Decision::new(
                memory,
                MoveCommand::stay(),
                Branch::Terminated,
            )),
        }
    }

    fn on_multiplicity(&self, snapshot: &Snapshot, memory: RobotMemory) -> Decision {
        let limit = self.threshold.as_angle();
        let target = snapshot
            .visible()
            .iter()
            .find(|p| p.is_multiplicity && p.offset < limit);
        match target {
            Some(p) => Decision::new(
                memory,
                MoveCommand::clockwise(p.offset.clone(), TargetKind::MultiplicityPosition),
                Branch::JoinOtherMultiplicity,
            ),
            None => Decision::new(memory, MoveCommand::stay(), Branch::HoldMultiplicity),
        }
    }
}

fn near_multiplicity(snapshot: &Snapshot, memory: RobotMemory) -> Decision {
    let cw = snapshot
        .first_cw()
        .filter(|p| p.is_multiplicity)
        .map(|p| p.offset.clone());
    let ccw = snapshot
        .first_ccw()
        .filter(|p| p.is_multiplicity)
        .map(|p| -&p.offset);
    let cmd = match (cw, ccw) {
        (Some(c), Some(a)) if a < c => {
            MoveCommand::counterclockwise(a, TargetKind::MultiplicityPosition)
        }
        (Some(c), _) => MoveCommand::clockwise(c, TargetKind::MultiplicityPosition),
        (None, Some(a)) => MoveCommand::counterclockwise(a, TargetKind::MultiplicityPosition),
        (None, None) => {
            return Decision::new(memory, MoveCommand::stay(), Branch::NoAdjacentMultiplicity)
        }
    };
    Decision::new(memory, cmd, Branch::JoinAdjacentMultiplicity)
}

fn leading_angle(snapshot: &Snapshot) -> Angle {
    snapshot
        .first_cw()
        .expect("non-empty snapshot")
        .offset
        .clone()
}

fn confused_consistent(a: &Assessment) -> Result<(), AnalysisError> {
    if a.tag == LeaderTag::ConfusedLeader && !(a.leads_c0 && !a.leads_c1) {
        return Err(AnalysisError::InvariantViolation(
            "confused leader leads C1 but not C0".into(),
        ));
    }
    Ok(())
}

fn decide_off(snapshot: &Snapshot) -> Result<Decision, AnalysisError> {
    let off = RobotMemory::Off;
    let a = match assess(snapshot) {
        Ok(a) => a,
        Err(AnalysisError::AmbiguousSymmetric) => {
            return Ok(Decision::new(
                off,
                MoveCommand::stay(),
                Branch::AmbiguousView,
            ));
        }
        Err(e) => return Err(e),
    };
    confused_consistent(&a)?;
    let lead = leading_angle(snapshot);
    let theta = lead.as_rational().clone();
    let d = match a.tag {
        LeaderTag::SureLeader => Decision::new(
            off,
            MoveCommand::clockwise(lead, TargetKind::NeighborPosition),
            Branch::SureLeaderAdvance,
        ),
        LeaderTag::ConfusedLeader if safe_from_assessment(snapshot, &a)? => Decision::new(
            off,
            MoveCommand::clockwise(lead, TargetKind::NeighborPosition),
            Branch::ConfusedSafeAdvance,
        ),
        LeaderTag::ConfusedLeader if !confused_peer_in_c0(snapshot)? => Decision::new(
            RobotMemory::MoveHalf,
            MoveCommand::clockwise(lead.div(2), TargetKind::RelativeAngle),
            Branch::ConfusedStartProbe,
        ),
        LeaderTag::ConfusedLeader => Decision::new(off, MoveCommand::stay(), Branch::ConfusedYield),
        LeaderTag::Follower => Decision::new(off, MoveCommand::stay(), Branch::Follower),
    };
    Ok(d.with_theta(theta))
}

/// Whether the first clockwise neighbour has a robot at its antipode.
fn neighbor_is_antipodal(snapshot: &Snapshot, lead: &Angle) -> bool {
    snapshot.sees(&(lead + &Angle::half()))
}

/// Any visible robot in the arc of the given raw extent starting at
/// `start`, closed at the start and open at the end. Extents of a full turn
/// or more cover the whole circle.
fn arc_occupied(snapshot: &Snapshot, start: Angle, extent: BigRational) -> bool {
    let arc = if extent >= BigRational::one() {
        ArcInterval::full(start)
    } else {
        ArcInterval::new(start, extent, Closure::ClosedOpen).expect("positive extent")
    };
    snapshot.visible().iter().any(|p| in_arc(&p.offset, &arc))
}

fn decide_move_half(snapshot: &Snapshot) -> Decision {
    // leading angle reads as theta/2
    let lead = leading_angle(snapshot);
    let theta = lead.as_rational() * BigRational::from_integer(2.into());
    if !neighbor_is_antipodal(snapshot, &lead) {
        return Decision::new(
            RobotMemory::Terminate,
            MoveCommand::stay(),
            Branch::HalfNeighborNotAntipodal,
        )
        .with_theta(theta);
    }
    // s is the observer's own antipode; arc [s - theta/2, s + theta/2)
    let s = Angle::half();
    let start = &s - &lead;
    if arc_occupied(snapshot, start, theta.clone()) {
        Decision::new(
            RobotMemory::Terminate,
            MoveCommand::counterclockwise(lead, TargetKind::RelativeAngle),
            Branch::HalfArcBlocked,
        )
        .with_theta(theta)
    } else {
        Decision::new(
            RobotMemory::MoveMore,
            MoveCommand::clockwise(lead.div(2), TargetKind::RelativeAngle),
            Branch::HalfArcClear,
        )
        .with_theta(theta)
    }
}

fn decide_move_more(snapshot: &Snapshot) -> Decision {
    // leading angle reads as theta/4
    let lead = leading_angle(snapshot);
    let quarter = lead.as_rational().clone();
    let theta = &quarter * BigRational::from_integer(4.into());
    if !neighbor_is_antipodal(snapshot, &lead) {
        return Decision::new(
            RobotMemory::Terminate,
            MoveCommand::stay(),
            Branch::MoreNeighborNotAntipodal,
        )
        .with_theta(theta);
    }
    // arc [s - 3theta/4, s + theta/4)
    let three_quarters = &quarter * BigRational::from_integer(3.into());
    let start = Angle::from_rational(BigRational::new(1.into(), 2.into()) - &three_quarters);
    if arc_occupied(snapshot, start, theta.clone()) {
        Decision::new(
            RobotMemory::Terminate,
            MoveCommand::counterclockwise(
                Angle::from_rational(three_quarters),
                TargetKind::RelativeAngle,
            ),
            Branch::MoreArcBlocked,
        )
        .with_theta(theta)
    } else {
        Decision::new(
            RobotMemory::Off,
            MoveCommand::clockwise(lead, TargetKind::NeighborPosition),
            Branch::MoreArcClear,
        )
        .with_theta(theta)
    }
}

/// Whether some other robot of the observer's `C0` hypothesis, judged with
/// full knowledge of `C0`, is itself a confused leader.
pub fn detect_confused_peer_in_c0(snapshot: &Snapshot) -> Result<bool, AnalysisError> {
    let a = assess(snapshot)?;
    if a.tag != LeaderTag::ConfusedLeader {
        return Err(AnalysisError::NotConfusedLeader);
    }
    confused_peer_in_c0(snapshot)
}

fn confused_peer_in_c0(snapshot: &Snapshot) -> Result<bool, AnalysisError> {
    let c0 = snapshot.c0_positions();
    for q in c0.iter().skip(1) {
        let view = Snapshot::observe(q, c0.iter().filter(|p| *p != q).map(|p| (p, true)));
        match assess(&view) {
            Ok(a) if a.tag == LeaderTag::ConfusedLeader => return Ok(true),
            Ok(_) | Err(AnalysisError::AmbiguousSymmetric) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(false)
}
