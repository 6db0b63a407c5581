//! Configuration reasoning: angle sequences, rotational symmetry, true-leader
//! election, local snapshots and the sure/confused/follower classification a
//! robot performs on its own view.
//!
//! Only [`classify`], [`hypothesis_configs`], [`is_safe_neighbor`] and
//! [`assess`] are usable by a robot: they consume a [`Snapshot`]. The global
//! operations ([`true_leader`], [`configuration_class`], ...) read the whole
//! configuration and exist for the simulator and the oracles.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::angle::{angular_distance, antipode, cw_angle, Angle};
use crate::config::{Configuration, Robot, RobotId};
use crate::error::AnalysisError;

/// Clockwise gaps between consecutive robots, starting at one robot.
/// Entries are amounts in `(0, 1]` and sum to exactly one turn; a lone
/// robot's single gap is the full turn.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AngleSequence(Vec<BigRational>);

impl AngleSequence {
    pub fn new(gaps: Vec<BigRational>) -> Self {
        AngleSequence(gaps)
    }

    pub fn gaps(&self) -> &[BigRational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Gap to the first clockwise neighbour.
    pub fn leading_angle(&self) -> &BigRational {
        &self.0[0]
    }
}

impl fmt::Display for AngleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}/{}", g.numer(), g.denom())?;
        }
        f.write_str(")")
    }
}

/// Distinct positions sorted by value (which is clockwise order from 0),
/// together with the clockwise gap following each point.
#[derive(Clone, Debug)]
pub(crate) struct Ring {
    points: Vec<Angle>,
    gaps: Vec<BigRational>,
}

impl Ring {
    pub(crate) fn new(positions: &[Angle]) -> Result<Ring, AnalysisError> {
        let mut points = positions.to_vec();
        points.sort();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(AnalysisError::MultiplicityPresent);
        }
        if points.is_empty() {
            return Err(AnalysisError::EmptyConfiguration);
        }
        let n = points.len();
        let gaps = if n == 1 {
            vec![BigRational::one()]
        } else {
            (0..n)
                .map(|i| cw_angle(&points[i], &points[(i + 1) % n]).into_rational())
                .collect()
        };
        Ok(Ring { points, gaps })
    }

    pub(crate) fn len(&self) -> usize {
        self.points.len()
    }

    pub(crate) fn point(&self, i: usize) -> &Angle {
        &self.points[i]
    }

    pub(crate) fn index_of(&self, pos: &Angle) -> Option<usize> {
        self.points.binary_search(pos).ok()
    }

    pub(crate) fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub(crate) fn sequence(&self, i: usize) -> AngleSequence {
        let n = self.len();
        AngleSequence((0..n).map(|k| self.gaps[(i + k) % n].clone()).collect())
    }

    fn cmp_rotations(&self, i: usize, j: usize) -> Ordering {
        let n = self.len();
        for k in 0..n {
            match self.gaps[(i + k) % n].cmp(&self.gaps[(j + k) % n]) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }

    /// Every index whose angle sequence is lexicographically minimal.
    fn minimal_rotations(&self) -> Vec<usize> {
        let mut best = vec![0];
        for i in 1..self.len() {
            match self.cmp_rotations(i, best[0]) {
                Ordering::Less => best = vec![i],
                Ordering::Equal => best.push(i),
                Ordering::Greater => {}
            }
        }
        best
    }

    /// A nontrivial rotation fixes the ring iff the minimal sequence is
    /// attained at more than one robot.
    pub(crate) fn is_symmetric(&self) -> bool {
        self.minimal_rotations().len() > 1
    }

    pub(crate) fn leader(&self) -> Result<usize, AnalysisError> {
        let best = self.minimal_rotations();
        if best.len() > 1 {
            Err(AnalysisError::SymmetricConfiguration)
        } else {
            Ok(best[0])
        }
    }
}

fn ring_of(config: &Configuration) -> Result<Ring, AnalysisError> {
    Ring::new(&config.positions())
}

/// The angle sequence of the robot at `r`.
pub fn angle_sequence(config: &Configuration, r: &Angle) -> Result<AngleSequence, AnalysisError> {
    let ring = ring_of(config)?;
    let i = ring
        .index_of(r)
        .ok_or_else(|| AnalysisError::UnknownRobot(r.to_string()))?;
    Ok(ring.sequence(i))
}

pub fn lex_compare(a: &AngleSequence, b: &AngleSequence) -> Result<Ordering, AnalysisError> {
    if a.len() != b.len() {
        return Err(AnalysisError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a.0.cmp(&b.0))
}

pub fn is_rotationally_symmetric(config: &Configuration) -> Result<bool, AnalysisError> {
    Ok(ring_of(config)?.is_symmetric())
}

/// Position of the robot with the strictly smallest angle sequence.
pub fn true_leader(config: &Configuration) -> Result<Angle, AnalysisError> {
    let ring = ring_of(config)?;
    Ok(ring.point(ring.leader()?).clone())
}

/// One occupied point as seen by an observer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VisiblePoint {
    /// Clockwise offset from the observer, never `0` or `1/2`.
    pub offset: Angle,
    pub is_multiplicity: bool,
}

/// Everything a robot perceives in one Look: occupied points at angular
/// distance strictly below a half turn, with weak multiplicity flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SnapshotDoc")]
pub struct Snapshot {
    visible: Vec<VisiblePoint>,
    self_is_multiplicity: bool,
}

#[derive(Deserialize)]
struct SnapshotDoc {
    visible: Vec<VisiblePoint>,
    self_is_multiplicity: bool,
}

impl TryFrom<SnapshotDoc> for Snapshot {
    type Error = AnalysisError;
    fn try_from(doc: SnapshotDoc) -> Result<Self, Self::Error> {
        Snapshot::new(doc.visible, doc.self_is_multiplicity)
    }
}

impl Snapshot {
    /// Validates the snapshot contract and orders points clockwise.
    pub fn new(
        mut visible: Vec<VisiblePoint>,
        self_is_multiplicity: bool,
    ) -> Result<Self, AnalysisError> {
        let half = Angle::half();
        for p in &visible {
            if p.offset.is_zero() {
                return Err(AnalysisError::ContractViolation(
                    "offset 0 is the observer's own point".into(),
                ));
            }
            if p.offset == half {
                return Err(AnalysisError::ContractViolation(
                    "antipodal point cannot be visible".into(),
                ));
            }
        }
        visible.sort_by(|a, b| a.offset.cmp(&b.offset));
        if visible.windows(2).any(|w| w[0].offset == w[1].offset) {
            return Err(AnalysisError::ContractViolation("duplicate offsets".into()));
        }
        Ok(Snapshot {
            visible,
            self_is_multiplicity,
        })
    }

    /// Build a multiplicity-free snapshot from clockwise offsets.
    pub fn from_offsets<I: IntoIterator<Item = Angle>>(offsets: I) -> Result<Self, AnalysisError> {
        let visible = offsets
            .into_iter()
            .map(|offset| VisiblePoint {
                offset,
                is_multiplicity: false,
            })
            .collect();
        Snapshot::new(visible, false)
    }

    /// What an observer at `observer` sees of `others`. Each other robot is
    /// given with a flag saying whether it counts towards multiplicity.
    pub fn observe<'a, I>(observer: &Angle, others: I) -> Snapshot
    where
        I: IntoIterator<Item = (&'a Angle, bool)>,
    {
        let half = Angle::half();
        let mut self_mult = false;
        // offset -> number of robots there that count for multiplicity
        let mut points: BTreeMap<Angle, usize> = BTreeMap::new();
        for (pos, counts) in others {
            let offset = cw_angle(observer, pos);
            if offset.is_zero() {
                self_mult |= counts;
            } else if angular_distance(observer, pos) < half {
                *points.entry(offset).or_default() += usize::from(counts);
            }
        }
        let visible = points
            .into_iter()
            .map(|(offset, counting)| VisiblePoint {
                offset,
                is_multiplicity: counting >= 2,
            })
            .collect();
        Snapshot {
            visible,
            self_is_multiplicity: self_mult,
        }
    }

    pub fn visible(&self) -> &[VisiblePoint] {
        &self.visible
    }

    pub fn self_is_multiplicity(&self) -> bool {
        self.self_is_multiplicity
    }

    pub fn is_empty(&self) -> bool {
        self.visible.is_empty()
    }

    pub fn has_multiplicity(&self) -> bool {
        self.self_is_multiplicity || self.visible.iter().any(|p| p.is_multiplicity)
    }

    /// First clockwise neighbour among visible points.
    pub fn first_cw(&self) -> Option<&VisiblePoint> {
        self.visible.first()
    }

    /// First counter-clockwise neighbour among visible points.
    pub fn first_ccw(&self) -> Option<&VisiblePoint> {
        self.visible.last()
    }

    pub fn sees(&self, offset: &Angle) -> bool {
        self.visible
            .binary_search_by(|p| p.offset.cmp(offset))
            .is_ok()
    }

    /// Observer at `0` plus every visible point, ignoring flags.
    pub(crate) fn c0_positions(&self) -> Vec<Angle> {
        std::iter::once(Angle::zero())
            .chain(self.visible.iter().map(|p| p.offset.clone()))
            .collect()
    }
}

/// Snapshot of `observer` inside `config`. Every coinciding robot counts
/// towards multiplicity.
pub fn take_snapshot(
    config: &Configuration,
    observer: &RobotId,
) -> Result<Snapshot, AnalysisError> {
    let me = config
        .robot(observer)
        .ok_or_else(|| AnalysisError::UnknownRobot(observer.0.clone()))?;
    let others = config
        .robots()
        .iter()
        .filter(|r| &r.id != observer)
        .map(|r| (&r.pos, true));
    Ok(Snapshot::observe(&me.pos, others))
}

/// Which of the two hypothesis configurations are possible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Possibility {
    OnlyC0,
    OnlyC1,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeaderTag {
    SureLeader,
    ConfusedLeader,
    Follower,
}

impl LeaderTag {
    pub fn is_expected_leader(self) -> bool {
        !matches!(self, LeaderTag::Follower)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LeaderClass {
    pub tag: LeaderTag,
    pub possibility: Possibility,
}

/// The two worlds an observer cannot tell apart: its antipode empty (`c0`)
/// or occupied (`c1`). Coordinates are relative to the observer, which sits
/// at `0` under id `self`; the hypothetical robot is `antipode`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    pub c0: Configuration,
    pub c1: Configuration,
    pub possibility: Possibility,
}

fn hypothesis_configuration(snapshot: &Snapshot, with_antipode: bool) -> Configuration {
    let mut robots = vec![Robot {
        id: RobotId::new("self"),
        pos: Angle::zero(),
    }];
    robots.extend(snapshot.visible.iter().enumerate().map(|(i, p)| Robot {
        id: RobotId(format!("v{}", i + 1)),
        pos: p.offset.clone(),
    }));
    if with_antipode {
        robots.push(Robot {
            id: RobotId::new("antipode"),
            pos: Angle::half(),
        });
    }
    Configuration::new(robots).expect("hypothesis ids are unique")
}

pub fn hypothesis_configs(snapshot: &Snapshot) -> Result<Hypotheses, AnalysisError> {
    let rings = HypothesisRings::new(snapshot)?;
    Ok(Hypotheses {
        c0: hypothesis_configuration(snapshot, false),
        c1: hypothesis_configuration(snapshot, true),
        possibility: rings.possibility()?,
    })
}

struct HypothesisRings {
    c0: Ring,
    c1: Ring,
    c0_symmetric: bool,
    c1_symmetric: bool,
}

impl HypothesisRings {
    fn new(snapshot: &Snapshot) -> Result<Self, AnalysisError> {
        if snapshot.has_multiplicity() {
            return Err(AnalysisError::MultiplicityInSnapshot);
        }
        let mut positions = snapshot.c0_positions();
        let c0 = Ring::new(&positions)?;
        positions.push(Angle::half());
        let c1 = Ring::new(&positions)?;
        let c0_symmetric = c0.is_symmetric();
        let c1_symmetric = c1.is_symmetric();
        Ok(HypothesisRings {
            c0,
            c1,
            c0_symmetric,
            c1_symmetric,
        })
    }

    fn possibility(&self) -> Result<Possibility, AnalysisError> {
        match (self.c0_symmetric, self.c1_symmetric) {
            (true, true) => Err(AnalysisError::AmbiguousSymmetric),
            (true, false) => Ok(Possibility::OnlyC1),
            (false, true) => Ok(Possibility::OnlyC0),
            (false, false) => Ok(Possibility::Both),
        }
    }
}

/// The raw ingredients of a classification, before any cross-checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    pub possibility: Possibility,
    /// Observer is the true leader of `C0` (false if `C0` is symmetric).
    pub leads_c0: bool,
    /// Observer is the true leader of `C1` (false if `C1` is symmetric).
    pub leads_c1: bool,
    /// Observer-relative leader of `C1`, which may be the hypothetical
    /// antipodal robot at `1/2`.
    pub c1_leader: Option<Angle>,
    /// First clockwise neighbour of the `C1` leader inside `C1`.
    pub c1_leader_neighbor: Option<Angle>,
    pub tag: LeaderTag,
}

/// Evaluate both hypotheses for the observer of `snapshot`.
pub fn assess(snapshot: &Snapshot) -> Result<Assessment, AnalysisError> {
    let rings = HypothesisRings::new(snapshot)?;
    let possibility = rings.possibility()?;
    let observer = Angle::zero();
    let leads_c0 = !rings.c0_symmetric && rings.c0.point(rings.c0.leader()?) == &observer;
    let (c1_leader, c1_leader_neighbor) = if rings.c1_symmetric {
        (None, None)
    } else {
        let i = rings.c1.leader()?;
        (
            Some(rings.c1.point(i).clone()),
            Some(rings.c1.point(rings.c1.next(i)).clone()),
        )
    };
    let leads_c1 = c1_leader.as_ref() == Some(&observer);
    let tag = match possibility {
        Possibility::OnlyC0 if leads_c0 => LeaderTag::SureLeader,
        Possibility::OnlyC1 if leads_c1 => LeaderTag::SureLeader,
        Possibility::Both if leads_c0 && leads_c1 => LeaderTag::SureLeader,
        Possibility::Both if leads_c0 != leads_c1 => LeaderTag::ConfusedLeader,
        _ => LeaderTag::Follower,
    };
    Ok(Assessment {
        possibility,
        leads_c0,
        leads_c1,
        c1_leader,
        c1_leader_neighbor,
        tag,
    })
}

/// Sure / confused / follower from the observer's own view.
///
/// A confused leader must lead `C0` and not `C1`; any other confused verdict
/// is reported as [`AnalysisError::InvariantViolation`].
pub fn classify(snapshot: &Snapshot) -> Result<LeaderClass, AnalysisError> {
    let a = assess(snapshot)?;
    if a.tag == LeaderTag::ConfusedLeader && !(a.leads_c0 && !a.leads_c1) {
        return Err(AnalysisError::InvariantViolation(
            "confused leader leads C1 but not C0".to_string(),
        ));
    }
    Ok(LeaderClass {
        tag: a.tag,
        possibility: a.possibility,
    })
}

/// Whether a confused leader's first clockwise neighbour `s` is safe: the
/// first clockwise neighbour of the `C1` leader must not sit at `s`'s
/// antipode.
pub fn is_safe_neighbor(snapshot: &Snapshot) -> Result<bool, AnalysisError> {
    let a = assess(snapshot)?;
    safe_from_assessment(snapshot, &a)
}

pub(crate) fn safe_from_assessment(
    snapshot: &Snapshot,
    a: &Assessment,
) -> Result<bool, AnalysisError> {
    if a.tag != LeaderTag::ConfusedLeader {
        return Err(AnalysisError::NotConfusedLeader);
    }
    let s = &snapshot
        .first_cw()
        .ok_or(AnalysisError::NotConfusedLeader)?
        .offset;
    let neighbor = a
        .c1_leader_neighbor
        .as_ref()
        .ok_or(AnalysisError::NotConfusedLeader)?;
    Ok(&antipode(s) != neighbor)
}

/// Initial-configuration taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigClass {
    A,
    BI,
    BII,
    C,
}

impl ConfigClass {
    pub const ALL: [ConfigClass; 4] = [
        ConfigClass::A,
        ConfigClass::BI,
        ConfigClass::BII,
        ConfigClass::C,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ConfigClass::A => "A",
            ConfigClass::BI => "BI",
            ConfigClass::BII => "BII",
            ConfigClass::C => "C",
        }
    }
}

impl fmt::Display for ConfigClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ConfigClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ConfigClass::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown configuration class {s:?}"))
    }
}

/// Per-robot result of a classification sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RobotVerdict {
    pub id: RobotId,
    pub pos: Angle,
    pub tag: LeaderTag,
    pub possibility: Possibility,
    /// Only present for confused leaders.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safe_neighbor: Option<bool>,
    #[serde(skip)]
    pub assessment: Assessment,
    #[serde(skip)]
    pub snapshot: Snapshot,
}

/// Classify every robot of a multiplicity-free configuration from its own
/// snapshot.
pub fn classify_all(config: &Configuration) -> Result<Vec<RobotVerdict>, AnalysisError> {
    if config.has_multiplicity() {
        return Err(AnalysisError::MultiplicityPresent);
    }
    config
        .robots()
        .iter()
        .map(|r| {
            let snapshot = take_snapshot(config, &r.id)?;
            let assessment = assess(&snapshot)?;
            let safe_neighbor = if assessment.tag == LeaderTag::ConfusedLeader {
                Some(safe_from_assessment(&snapshot, &assessment)?)
            } else {
                None
            };
            Ok(RobotVerdict {
                id: r.id.clone(),
                pos: r.pos.clone(),
                tag: assessment.tag,
                possibility: assessment.possibility,
                safe_neighbor,
                assessment,
                snapshot,
            })
        })
        .collect()
}

/// Full analysis of a legal configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub class: ConfigClass,
    pub leader: Angle,
    pub expected_leaders: Vec<RobotId>,
    pub robots: Vec<RobotVerdict>,
}

pub fn analyze(config: &Configuration) -> Result<AnalysisReport, AnalysisError> {
    if config.has_multiplicity() {
        return Err(AnalysisError::MultiplicityPresent);
    }
    let ring = ring_of(config)?;
    let leader = ring.point(ring.leader()?).clone();
    let robots = classify_all(config)?;
    let class = class_from_verdicts(&leader, &robots)?;
    let expected_leaders = robots
        .iter()
        .filter(|v| v.tag.is_expected_leader())
        .map(|v| v.id.clone())
        .collect();
    Ok(AnalysisReport {
        class,
        leader,
        expected_leaders,
        robots,
    })
}

/// A / BI / BII / C classification of an asymmetric, multiplicity-free
/// configuration.
pub fn configuration_class(config: &Configuration) -> Result<ConfigClass, AnalysisError> {
    Ok(analyze(config)?.class)
}

fn class_from_verdicts(
    leader: &Angle,
    robots: &[RobotVerdict],
) -> Result<ConfigClass, AnalysisError> {
    for v in robots {
        if v.tag == LeaderTag::ConfusedLeader && !(v.assessment.leads_c0 && !v.assessment.leads_c1)
        {
            return Err(AnalysisError::InvariantViolation(format!(
                "confused leader at {} leads C1 but not C0",
                v.pos
            )));
        }
        if v.tag == LeaderTag::SureLeader && &v.pos != leader {
            return Err(AnalysisError::InvariantViolation(format!(
                "sure leader at {} is not the true leader {}",
                v.pos, leader
            )));
        }
    }
    let expected: Vec<&RobotVerdict> = robots
        .iter()
        .filter(|v| v.tag.is_expected_leader())
        .collect();
    let true_leader = expected.iter().find(|v| &v.pos == leader).ok_or_else(|| {
        AnalysisError::InvariantViolation(format!("true leader {leader} is not an expected leader"))
    })?;
    match expected.len() {
        1 => match true_leader.tag {
            LeaderTag::SureLeader => Ok(ConfigClass::A),
            _ if true_leader.safe_neighbor == Some(true) => Ok(ConfigClass::A),
            _ => Ok(ConfigClass::C),
        },
        2 => {
            let other = expected
                .iter()
                .find(|v| &v.pos != leader)
                .expect("two expected leaders");
            if other.safe_neighbor == Some(true) {
                Ok(ConfigClass::BI)
            } else {
                Ok(ConfigClass::BII)
            }
        }
        k => Err(AnalysisError::InvariantViolation(format!(
            "{k} expected leaders"
        ))),
    }
}
