//! Independent oracles and randomized searchers.
//!
//! Nothing here reuses the leader-election code path of [`crate::analysis`]
//! for the checks that cross-validate it: [`brute_force_leader`] runs
//! Booth's least-rotation algorithm and a prefix-function period test on the
//! gap sequence.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{self, classify_all, ConfigClass, LeaderTag, RobotVerdict};
use crate::angle::{antipode, common_denominator, cw_angle, Angle};
use crate::config::{Configuration, RobotId};
use crate::error::AnalysisError;
use crate::sim::{ScriptedActivation, SimTime};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("no legal configuration found after {0} attempts")]
    GenerationExhausted(usize),
    #[error("configuration is rotationally symmetric")]
    SymmetricConfiguration,
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Parameters for drawing a random legal initial configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n: usize,
    /// Positions are drawn from the grid `k / denominator_bound`.
    pub denominator_bound: u64,
    pub seed: u64,
    #[serde(default = "default_retries")]
    pub max_retries: usize,
}

fn default_retries() -> usize {
    1000
}

impl GeneratorSpec {
    pub fn new(n: usize, denominator_bound: u64, seed: u64) -> Self {
        GeneratorSpec {
            n,
            denominator_bound,
            seed,
            max_retries: default_retries(),
        }
    }
}

/// `n` distinct grid positions forming an asymmetric configuration;
/// deterministic in the seed.
pub fn random_config(spec: &GeneratorSpec) -> Result<Configuration, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let grid = spec.denominator_bound as usize;
    if spec.n == 0 || grid < spec.n {
        return Err(OracleError::GenerationExhausted(0));
    }
    for _ in 0..spec.max_retries {
        let mut ks = sample(&mut rng, grid, spec.n).into_vec();
        ks.sort_unstable();
        let config = Configuration::from_positions(
            ks.into_iter()
                .map(|k| Angle::new(k as i64, spec.denominator_bound as i64)),
        )?;
        if config.check_legal_initial().is_ok() {
            return Ok(config);
        }
    }
    Err(OracleError::GenerationExhausted(spec.max_retries))
}

/// Start index of the lexicographically least rotation (Booth).
fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = &s[j % n];
        let mut i = f[j - k - 1];
        while i != usize::MAX && sj != &s[(k + i + 1) % n] {
            if sj < &s[(k + i + 1) % n] {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && sj != &s[(k + i.wrapping_add(1)) % n] {
            if sj < &s[k % n] {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = i.wrapping_add(1);
        }
    }
    k % n
}

/// Smallest period of `s` as a cyclic word, via the prefix function.
fn cyclic_period<T: Eq>(s: &[T]) -> usize {
    let n = s.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

/// Leader by least cyclic rotation of the gap sequence.
pub fn brute_force_leader(config: &Configuration) -> Result<Angle, OracleError> {
    let mut pts = config.positions();
    pts.sort();
    pts.dedup();
    if pts.len() != config.len() {
        return Err(AnalysisError::MultiplicityPresent.into());
    }
    let n = pts.len();
    if n == 1 {
        return Ok(pts[0].clone());
    }
    let gaps: Vec<BigRational> = (0..n)
        .map(|i| cw_angle(&pts[i], &pts[(i + 1) % n]).into_rational())
        .collect();
    if cyclic_period(&gaps) < n {
        return Err(OracleError::SymmetricConfiguration);
    }
    Ok(pts[least_rotation(&gaps)].clone())
}

/// The statements checked by [`check_propositions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    /// No robot on the left of the true leader repeats a prefix of the
    /// leader's sequence up to the leader.
    NoLeftPrefixTwin,
    /// Adding a robot without creating symmetry moves the leader only into
    /// the clockwise arc from the old leader to the new robot.
    InsertionKeepsLeaderInArc,
    /// A confused leader leads `C0` and not `C1`.
    ConfusedLeadsC0Only,
    /// A confused true leader has an empty antipode.
    TrueConfusedAntipodeEmpty,
    /// A confused non-leader has an occupied antipode.
    OtherConfusedAntipodeOccupied,
    /// Any other expected leader lies at least a half turn clockwise from
    /// the true leader.
    ExpectedLeaderFarSide,
    /// At most one confused leader besides the true leader (hence one or two
    /// expected leaders, at most one sure leader).
    AtMostOneOtherConfused,
    /// Two confused leaders are never antipodal.
    ConfusedNotAntipodal,
    /// The first clockwise neighbours of two confused leaders are never
    /// antipodal.
    ConfusedNeighborsNotAntipodal,
}

impl Statement {
    pub const ALL: [Statement; 9] = [
        Statement::NoLeftPrefixTwin,
        Statement::InsertionKeepsLeaderInArc,
        Statement::ConfusedLeadsC0Only,
        Statement::TrueConfusedAntipodeEmpty,
        Statement::OtherConfusedAntipodeOccupied,
        Statement::ExpectedLeaderFarSide,
        Statement::AtMostOneOtherConfused,
        Statement::ConfusedNotAntipodal,
        Statement::ConfusedNeighborsNotAntipodal,
    ];
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("statement serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementResult {
    pub statement: Statement,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropositionReport {
    pub results: Vec<StatementResult>,
    pub expected_leaders: usize,
}

impl PropositionReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &StatementResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    pub fn result(&self, s: Statement) -> &StatementResult {
        self.results
            .iter()
            .find(|r| r.statement == s)
            .expect("all statements reported")
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PropositionOptions {
    /// Probe robots for the insertion statement are placed on the grid
    /// `k / probe_denominator`. `None` uses twice the configuration's common
    /// denominator, which includes every gap midpoint and antipode.
    pub probe_denominator: Option<u64>,
}

/// Evaluate all nine statements on an asymmetric multiplicity-free
/// configuration. Failures are reported, not raised.
pub fn check_propositions(config: &Configuration) -> Result<PropositionReport, OracleError> {
    check_propositions_with(config, PropositionOptions::default())
}

pub fn check_propositions_with(
    config: &Configuration,
    options: PropositionOptions,
) -> Result<PropositionReport, OracleError> {
    config.check_legal_initial()?;
    let leader = analysis::true_leader(config)?;
    let verdicts = classify_all(config)?;
    let ctx = Context {
        config,
        leader: &leader,
        verdicts: &verdicts,
    };
    let results = vec![
        ctx.no_left_prefix_twin()?,
        ctx.insertion_keeps_leader_in_arc(options)?,
        ctx.confused_leads_c0_only(),
        ctx.true_confused_antipode_empty(),
        ctx.other_confused_antipode_occupied(),
        ctx.expected_leader_far_side(),
        ctx.at_most_one_other_confused(),
        ctx.confused_not_antipodal(),
        ctx.confused_neighbors_not_antipodal(),
    ];
    let expected_leaders = verdicts
        .iter()
        .filter(|v| v.tag.is_expected_leader())
        .count();
    Ok(PropositionReport {
        results,
        expected_leaders,
    })
}

struct Context<'a> {
    config: &'a Configuration,
    leader: &'a Angle,
    verdicts: &'a [RobotVerdict],
}

fn outcome(statement: Statement, witness: Option<String>) -> StatementResult {
    StatementResult {
        statement,
        passed: witness.is_none(),
        witness,
    }
}

impl Context<'_> {
    fn confused(&self) -> impl Iterator<Item = &RobotVerdict> {
        self.verdicts
            .iter()
            .filter(|v| v.tag == LeaderTag::ConfusedLeader)
    }

    fn sorted_positions(&self) -> Vec<Angle> {
        let mut p = self.config.positions();
        p.sort();
        p
    }

    fn first_cw_neighbor(&self, pos: &Angle) -> Angle {
        let pts = self.sorted_positions();
        let i = pts.binary_search(pos).expect("robot position");
        pts[(i + 1) % pts.len()].clone()
    }

    fn no_left_prefix_twin(&self) -> Result<StatementResult, OracleError> {
        let pts = self.sorted_positions();
        let n = pts.len();
        let li = pts.binary_search(self.leader).expect("leader position");
        let leader_seq = analysis::angle_sequence(self.config, self.leader)?;
        let half = Angle::half();
        for (ri, r) in pts.iter().enumerate() {
            if cw_angle(self.leader, r) <= half {
                continue;
            }
            let steps = (li + n - ri) % n;
            let seq = analysis::angle_sequence(self.config, r)?;
            if seq.gaps()[..steps] == leader_seq.gaps()[..steps] {
                return Ok(outcome(
                    Statement::NoLeftPrefixTwin,
                    Some(format!(
                        "robot at {r} repeats the leader's first {steps} gaps"
                    )),
                ));
            }
        }
        Ok(outcome(Statement::NoLeftPrefixTwin, None))
    }

    fn insertion_keeps_leader_in_arc(
        &self,
        options: PropositionOptions,
    ) -> Result<StatementResult, OracleError> {
        let grid = match options.probe_denominator {
            Some(d) => BigInt::from(d),
            None => common_denominator(self.config.robots().iter().map(|r| &r.pos)) * 2,
        };
        let grid = grid.to_i64().expect("probe grid fits in i64");
        let probe_id = RobotId::new("probe");
        for k in 0..grid {
            let probe = Angle::new(k, grid);
            if self.config.is_occupied(&probe) {
                continue;
            }
            let extended = self.config.with_robot(probe_id.clone(), probe.clone())?;
            let new_leader = match analysis::true_leader(&extended) {
                Ok(l) => l,
                Err(AnalysisError::SymmetricConfiguration) => continue,
                Err(e) => return Err(e.into()),
            };
            if cw_angle(self.leader, &new_leader) > cw_angle(self.leader, &probe) {
                return Ok(outcome(
                    Statement::InsertionKeepsLeaderInArc,
                    Some(format!(
                        "probe at {probe} moves the leader from {} to {new_leader}",
                        self.leader
                    )),
                ));
            }
        }
        Ok(outcome(Statement::InsertionKeepsLeaderInArc, None))
    }

    fn confused_leads_c0_only(&self) -> StatementResult {
        let bad = self
            .confused()
            .find(|v| !(v.assessment.leads_c0 && !v.assessment.leads_c1));
        outcome(
            Statement::ConfusedLeadsC0Only,
            bad.map(|v| format!("confused leader at {} leads C1 but not C0", v.pos)),
        )
    }

    fn true_confused_antipode_empty(&self) -> StatementResult {
        let bad = self
            .confused()
            .find(|v| &v.pos == self.leader && self.config.is_occupied(&antipode(&v.pos)));
        outcome(
            Statement::TrueConfusedAntipodeEmpty,
            bad.map(|v| format!("confused true leader at {} has an occupied antipode", v.pos)),
        )
    }

    fn other_confused_antipode_occupied(&self) -> StatementResult {
        let bad = self
            .confused()
            .find(|v| &v.pos != self.leader && !self.config.is_occupied(&antipode(&v.pos)));
        outcome(
            Statement::OtherConfusedAntipodeOccupied,
            bad.map(|v| format!("confused robot at {} has an empty antipode", v.pos)),
        )
    }

    fn expected_leader_far_side(&self) -> StatementResult {
        let half = Angle::half();
        let bad = self
            .verdicts
            .iter()
            .filter(|v| v.tag.is_expected_leader() && &v.pos != self.leader)
            .find(|v| cw_angle(self.leader, &v.pos) < half);
        outcome(
            Statement::ExpectedLeaderFarSide,
            bad.map(|v| {
                format!(
                    "expected leader at {} is only {} clockwise of the leader",
                    v.pos,
                    cw_angle(self.leader, &v.pos)
                )
            }),
        )
    }

    fn at_most_one_other_confused(&self) -> StatementResult {
        let others = self.confused().filter(|v| &v.pos != self.leader).count();
        let sure = self
            .verdicts
            .iter()
            .filter(|v| v.tag == LeaderTag::SureLeader)
            .count();
        let expected = self
            .verdicts
            .iter()
            .filter(|v| v.tag.is_expected_leader())
            .count();
        let witness = if others > 1 {
            Some(format!("{others} confused leaders besides the true leader"))
        } else if sure > 1 {
            Some(format!("{sure} sure leaders"))
        } else if !(1..=2).contains(&expected) {
            Some(format!("{expected} expected leaders"))
        } else {
            None
        };
        outcome(Statement::AtMostOneOtherConfused, witness)
    }

    fn confused_pairs(&self) -> Vec<(&RobotVerdict, &RobotVerdict)> {
        let c: Vec<&RobotVerdict> = self.confused().collect();
        let mut pairs = Vec::new();
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                pairs.push((c[i], c[j]));
            }
        }
        pairs
    }

    fn confused_not_antipodal(&self) -> StatementResult {
        let bad = self
            .confused_pairs()
            .into_iter()
            .find(|(p, q)| antipode(&p.pos) == q.pos);
        outcome(
            Statement::ConfusedNotAntipodal,
            bad.map(|(p, q)| format!("confused leaders at {} and {} are antipodal", p.pos, q.pos)),
        )
    }

    fn confused_neighbors_not_antipodal(&self) -> StatementResult {
        let bad = self.confused_pairs().into_iter().find(|(p, q)| {
            antipode(&self.first_cw_neighbor(&p.pos)) == self.first_cw_neighbor(&q.pos)
        });
        outcome(
            Statement::ConfusedNeighborsNotAntipodal,
            bad.map(|(p, q)| {
                format!(
                    "neighbours of confused leaders at {} and {} are antipodal",
                    p.pos, q.pos
                )
            }),
        )
    }
}

/// First generated configuration of class `target`, trying seeds
/// `spec.seed, spec.seed + 1, ...` for `budget` attempts.
pub fn search_class(
    target: ConfigClass,
    spec: &GeneratorSpec,
    budget: usize,
) -> Option<Configuration> {
    (0..budget as u64).find_map(|i| {
        let attempt = GeneratorSpec {
            seed: spec.seed.wrapping_add(i),
            ..spec.clone()
        };
        let config = random_config(&attempt).ok()?;
        (analysis::configuration_class(&config).ok()? == target).then_some(config)
    })
}

/// Shrink a configuration while `keep` holds: drop robots first, then
/// coarsen the common denominator. Only legal initial configurations are
/// considered.
pub fn shrink<F>(config: &Configuration, keep: F) -> Configuration
where
    F: Fn(&Configuration) -> bool,
{
    let legal_and_kept = |c: &Configuration| c.check_legal_initial().is_ok() && keep(c);
    let mut best = config.clone();
    'robots: loop {
        if best.len() <= 2 {
            break;
        }
        for skip in 0..best.len() {
            let fewer: Vec<Angle> = best
                .positions()
                .into_iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p)
                .collect();
            let candidate = Configuration::from_positions(fewer).expect("non-empty");
            if legal_and_kept(&candidate) {
                best = candidate;
                continue 'robots;
            }
        }
        break;
    }
    'grid: loop {
        let den = common_denominator(best.robots().iter().map(|r| &r.pos));
        for p in small_prime_factors(&den) {
            let coarse = &den / p;
            if coarse.is_zero() {
                continue;
            }
            let rounded = best
                .positions()
                .into_iter()
                .map(|pos| round_to_grid(&pos, &coarse));
            let candidate = Configuration::from_positions(rounded).expect("non-empty");
            if legal_and_kept(&candidate) {
                best = candidate;
                continue 'grid;
            }
        }
        break;
    }
    best
}

fn small_prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            out.push(p.clone());
            while (&m % &p).is_zero() {
                m /= &p;
            }
        }
        p += 1;
    }
    if m > BigInt::one() {
        out.push(m);
    }
    out
}

fn round_to_grid(pos: &Angle, grid: &BigInt) -> Angle {
    let scaled = pos.as_rational() * BigRational::from_integer(grid.clone());
    let k = scaled.round().to_integer();
    Angle::from_rational(BigRational::new(k, grid.clone()))
}

/// Order two configurations by size then by position list; used to pick
/// a canonical witness among equals.
pub fn witness_order(a: &Configuration, b: &Configuration) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.positions().cmp(&b.positions()))
}

/// How an adversarial script treats the robots it is told to delay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Adversary {
    /// Each round, everyone else completes a full cycle before the delayed
    /// robots look.
    DelayLast,
    /// Each round, the delayed robots look first and everyone else looks
    /// while they are still moving.
    Pounce,
}

/// A finite scripted schedule of `rounds` rounds, three time units apart,
/// in which every robot acts once per round. Moves are shorter than half a
/// turn, so no robot is ever activated mid-move.
pub fn adversarial_script(
    config: &Configuration,
    delayed: &[RobotId],
    rounds: usize,
    adversary: Adversary,
) -> Vec<ScriptedActivation> {
    let mut ids: Vec<&RobotId> = config.robots().iter().map(|r| &r.id).collect();
    ids.sort();
    let (late, early): (Vec<&RobotId>, Vec<&RobotId>) =
        ids.into_iter().partition(|id| delayed.contains(id));
    let n = config.len() as i64;
    let step = |i: usize, den: i64| BigRational::new(BigInt::from(i as i64), BigInt::from(den));
    let at = |base: &BigRational, offset: BigRational| {
        SimTime::from_rational(base + offset).expect("non-negative")
    };
    let mut script = Vec::new();
    for k in 0..rounds {
        let base = BigRational::from_integer(BigInt::from(3 * k as i64));
        match adversary {
            Adversary::DelayLast => {
                // early robots look in [T, T + 1/4] and stop moving before T + 1
                for (i, id) in early.iter().enumerate() {
                    script.push(ScriptedActivation {
                        robot: (*id).clone(),
                        t: at(&base, step(i, 4 * n)),
                        lc: SimTime::new(1, 4 * n),
                    });
                }
                for (j, id) in late.iter().enumerate() {
                    script.push(ScriptedActivation {
                        robot: (*id).clone(),
                        t: at(&base, BigRational::one() + step(j, 4 * n)),
                        lc: SimTime::new(1, 4 * n),
                    });
                }
            }
            Adversary::Pounce => {
                for (j, id) in late.iter().enumerate() {
                    script.push(ScriptedActivation {
                        robot: (*id).clone(),
                        t: at(&base, step(j, 16 * n)),
                        lc: SimTime::new(1, 4),
                    });
                }
                // the delayed robots decide at T + 1/4 + j/16n; pounce right after
                for (i, id) in early.iter().enumerate() {
                    script.push(ScriptedActivation {
                        robot: (*id).clone(),
                        t: at(
                            &base,
                            BigRational::new(1.into(), 4.into()) + step(late.len() + i + 1, 16 * n),
                        ),
                        lc: SimTime::new(1, 16 * n),
                    });
                }
            }
        }
    }
    script
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_deterministic() {
        let spec = GeneratorSpec::new(4, 20, 1);
        let a = random_config(&spec).unwrap();
        let b = random_config(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(a.check_legal_initial().is_ok());
    }

    #[test]
    fn generator_two_robots_never_antipodal() {
        for seed in 0..50 {
            let c = random_config(&GeneratorSpec::new(2, 10, seed)).unwrap();
            let p = c.positions();
            assert_ne!(p[0], antipode(&p[1]));
        }
    }

    #[test]
    fn generator_reports_exhaustion() {
        assert_eq!(
            random_config(&GeneratorSpec::new(3, 1, 0)),
            Err(OracleError::GenerationExhausted(0))
        );
        // only {0, 1/2} exists at denominator 2, and it is symmetric
        let spec = GeneratorSpec {
            max_retries: 10,
            ..GeneratorSpec::new(2, 2, 0)
        };
        assert_eq!(
            random_config(&spec),
            Err(OracleError::GenerationExhausted(10))
        );
    }

    #[test]
    fn least_rotation_and_period() {
        assert_eq!(least_rotation(b"banana"), 5);
        assert_eq!(least_rotation(b"aaa"), 0);
        assert_eq!(least_rotation(b"taa"), 1);
        assert_eq!(cyclic_period(b"abab"), 2);
        assert_eq!(cyclic_period(b"abaab"), 5);
        assert_eq!(cyclic_period(b"aaaa"), 1);
    }

    #[test]
    fn brute_force_leader_examples() {
        let c = Configuration::from_fractions(10, &[0, 1, 3, 6]).unwrap();
        assert_eq!(brute_force_leader(&c).unwrap(), Angle::zero());
        let r = Angle::new(1, 7);
        assert_eq!(brute_force_leader(&c.rotated(&r)).unwrap(), r);
        let w = Configuration::from_fractions(20, &[0, 2, 9, 14]).unwrap();
        assert_eq!(brute_force_leader(&w).unwrap(), Angle::zero());
        let sq = Configuration::from_fractions(4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(
            brute_force_leader(&sq),
            Err(OracleError::SymmetricConfiguration)
        );
    }

    #[test]
    fn worked_example_passes_all_statements() {
        let w = Configuration::from_fractions(20, &[0, 2, 9, 14]).unwrap();
        let report = check_propositions(&w).unwrap();
        assert!(report.all_passed(), "{report:?}");
        assert_eq!(report.expected_leaders, 1);
    }

    #[test]
    fn probe_at_19_20_moves_leader_into_arc() {
        let w = Configuration::from_fractions(20, &[0, 2, 9, 14]).unwrap();
        let extended = w
            .with_robot(RobotId::new("probe"), Angle::new(19, 20))
            .unwrap();
        let new_leader = analysis::true_leader(&extended).unwrap();
        // enumeration: sequence (1,2,7,5,5)/20 from 19/20 is minimal
        let seqs: Vec<_> = extended
            .positions()
            .iter()
            .map(|p| (analysis::angle_sequence(&extended, p).unwrap(), p.clone()))
            .collect();
        let min = seqs
            .iter()
            .min_by(|a, b| a.0.gaps().cmp(b.0.gaps()))
            .unwrap();
        assert_eq!(min.1, Angle::new(19, 20));
        assert_eq!(new_leader, Angle::new(19, 20));
        assert!(
            cw_angle(&Angle::zero(), &new_leader) <= cw_angle(&Angle::zero(), &Angle::new(19, 20))
        );
    }

    #[test]
    fn search_with_zero_budget_finds_nothing() {
        assert!(search_class(ConfigClass::A, &GeneratorSpec::new(4, 20, 0), 0).is_none());
    }

    #[test]
    fn search_finds_class_a() {
        let found = search_class(ConfigClass::A, &GeneratorSpec::new(4, 20, 0), 100).unwrap();
        assert_eq!(
            analysis::configuration_class(&found).unwrap(),
            ConfigClass::A
        );
    }

    #[test]
    fn shrink_keeps_predicate() {
        let big = Configuration::from_fractions(40, &[0, 3, 7, 13, 22, 31]).unwrap();
        let small = shrink(&big, |c| c.len() >= 3);
        assert_eq!(small.len(), 3);
        assert!(small.check_legal_initial().is_ok());
    }
}
