//! Batch verification: the proposition sweep, leader cross-check, class
//! search and simulation batches behind `gather-sim verify`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{angle_sequence, configuration_class, true_leader, ConfigClass};
use crate::angle::Angle;
use crate::config::Configuration;
use crate::oracle::{
    brute_force_leader, check_propositions, random_config, search_class, GeneratorSpec,
};
use crate::sim::{run, PolicySpec, RunConfig, SimError, Trace};

/// Deliberately broken variants, used to check that verification notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutant {
    /// Elect the robot with the lexicographically largest sequence.
    FlipLeader,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub n_min: usize,
    pub n_max: usize,
    pub count: usize,
    pub seed: u64,
    pub denominator_bound: u64,
    /// Attempts per class in the class search; 0 skips the search.
    pub class_budget: usize,
    /// Number of configurations simulated under every policy.
    pub sim_count: usize,
    pub max_events: usize,
    pub mutant: Option<Mutant>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_min: 3,
            n_max: 8,
            count: 2000,
            seed: 0,
            denominator_bound: 120,
            class_budget: 100_000,
            sim_count: 0,
            max_events: 100_000,
            mutant: None,
        }
    }
}

impl VerifyOptions {
    /// The generator spec for the `i`-th sweep configuration.
    pub fn spec(&self, i: usize) -> GeneratorSpec {
        let span = self.n_max.saturating_sub(self.n_min) + 1;
        GeneratorSpec::new(
            self.n_min + i % span,
            self.denominator_bound,
            self.seed.wrapping_add(i as u64),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub config: Configuration,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub checked: usize,
    pub generation_failures: usize,
    pub expected_leader_counts: BTreeMap<usize, usize>,
    pub class_counts: BTreeMap<String, usize>,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimReport {
    pub runs: usize,
    pub gathered: usize,
    pub max_simultaneous_multiplicities: usize,
    pub countermoves: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub sweep: SweepReport,
    pub classes_found: BTreeMap<String, Option<Configuration>>,
    pub simulations: SimReport,
    pub passed: bool,
}

fn leader_under(mutant: Option<Mutant>, config: &Configuration) -> Result<Angle, String> {
    match mutant {
        None => true_leader(config).map_err(|e| e.to_string()),
        Some(Mutant::FlipLeader) => config
            .positions()
            .into_iter()
            .map(|p| angle_sequence(config, &p).map(|s| (s, p)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?
            .into_iter()
            .max_by(|a, b| a.0.gaps().cmp(b.0.gaps()))
            .map(|(_, p)| p)
            .ok_or_else(|| "empty configuration".to_string()),
    }
}

struct SweepItem {
    expected: Option<usize>,
    class: Option<ConfigClass>,
    failures: Vec<Failure>,
}

fn sweep_one(config: &Configuration, mutant: Option<Mutant>) -> SweepItem {
    let fail = |check: &str, witness: String| Failure {
        check: check.into(),
        config: config.clone(),
        witness,
    };
    let mut failures = Vec::new();
    let expected = match check_propositions(config) {
        Ok(report) => {
            for f in report.failures() {
                failures.push(fail(
                    &f.statement.to_string(),
                    f.witness.clone().unwrap_or_default(),
                ));
            }
            Some(report.expected_leaders)
        }
        Err(e) => {
            failures.push(fail("propositions", e.to_string()));
            None
        }
    };
    match (leader_under(mutant, config), brute_force_leader(config)) {
        (Ok(a), Ok(b)) if a == b => {}
        (a, b) => failures.push(fail(
            "leader-oracle",
            format!("analysis {a:?}, least rotation {b:?}"),
        )),
    }
    let class = match configuration_class(config) {
        Ok(c) => Some(c),
        Err(e) => {
            failures.push(fail("configuration-class", e.to_string()));
            None
        }
    };
    SweepItem {
        expected,
        class,
        failures,
    }
}

/// Check every statement and the leader cross-check on `options.count`
/// generated configurations.
pub fn sweep(options: &VerifyOptions) -> SweepReport {
    let items: Vec<Option<SweepItem>> = (0..options.count)
        .into_par_iter()
        .map(|i| {
            random_config(&options.spec(i))
                .ok()
                .map(|c| sweep_one(&c, options.mutant))
        })
        .collect();
    let mut report = SweepReport::default();
    for item in items {
        let Some(item) = item else {
            report.generation_failures += 1;
            continue;
        };
        report.checked += 1;
        if let Some(e) = item.expected {
            *report.expected_leader_counts.entry(e).or_default() += 1;
        }
        if let Some(c) = item.class {
            *report.class_counts.entry(c.to_string()).or_default() += 1;
        }
        report.failures.extend(item.failures);
    }
    report
}

/// Search each class with the sweep's generator shape.
pub fn find_classes(options: &VerifyOptions) -> BTreeMap<String, Option<Configuration>> {
    ConfigClass::ALL
        .par_iter()
        .map(|&class| {
            let found = (options.n_min..=options.n_max).find_map(|n| {
                let spec = GeneratorSpec::new(n, options.denominator_bound, options.seed);
                search_class(
                    class,
                    &spec,
                    options.class_budget / (options.n_max - options.n_min + 1).max(1),
                )
            });
            (class.to_string(), found)
        })
        .collect()
}

/// The policies every batch configuration runs under.
pub fn batch_policies(seed: u64) -> Vec<PolicySpec> {
    vec![
        PolicySpec::fsync(),
        PolicySpec::ssync(seed),
        PolicySpec::async_random(seed),
        PolicySpec::async_random(seed.wrapping_add(1)),
        PolicySpec::async_random(seed.wrapping_add(2)),
    ]
}

/// Check one finished run: gathered, at most two multiplicity points,
/// well-formed, exact countermoves.
pub fn check_run(cfg: &RunConfig) -> (Result<usize, String>, Option<Trace>) {
    let trace = match run(cfg) {
        Ok(t) => t,
        Err(SimError::LimitExceeded(t)) => {
            return (
                Err(format!(
                    "no quiescence within {} events",
                    t.summary.event_count
                )),
                Some(*t),
            )
        }
        Err(e) => return (Err(e.to_string()), None),
    };
    let verdict = (|| {
        trace.validate()?;
        if !trace.summary.gathered {
            return Err(format!(
                "ended {:?} without gathering",
                trace.summary.outcome
            ));
        }
        if trace.summary.max_simultaneous_multiplicities > 2 {
            return Err(format!(
                "{} simultaneous multiplicity points",
                trace.summary.max_simultaneous_multiplicities
            ));
        }
        let cms = trace.countermoves();
        if let Some(c) = cms.iter().find(|c| !c.is_exact()) {
            return Err(format!(
                "{} countermove ended at {} instead of {}",
                c.robot, c.after, c.before
            ));
        }
        Ok(cms.len())
    })();
    (verdict, Some(trace))
}

pub fn simulate(options: &VerifyOptions) -> SimReport {
    let jobs: Vec<(Configuration, PolicySpec)> = (0..options.sim_count)
        .filter_map(|i| random_config(&options.spec(i)).ok().map(|c| (i, c)))
        .flat_map(|(i, c)| {
            batch_policies(options.seed.wrapping_add(i as u64))
                .into_iter()
                .map(move |p| (c.clone(), p))
        })
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(c, p)| {
            let mut cfg = RunConfig::new(c.clone(), p.clone());
            cfg.limits.max_events = options.max_events;
            let (verdict, trace) = check_run(&cfg);
            let mult = trace
                .as_ref()
                .map_or(0, |t| t.summary.max_simultaneous_multiplicities);
            let gathered = trace.as_ref().is_some_and(|t| t.summary.gathered);
            (c, p.kind, verdict, mult, gathered)
        })
        .collect();
    let mut report = SimReport::default();
    for (c, kind, verdict, mult, gathered) in results {
        report.runs += 1;
        report.gathered += usize::from(gathered);
        report.max_simultaneous_multiplicities = report.max_simultaneous_multiplicities.max(mult);
        match verdict {
            Ok(n) => report.countermoves += n,
            Err(w) => report.failures.push(Failure {
                check: format!("simulation {kind}"),
                config: c.clone(),
                witness: w,
            }),
        }
    }
    report
}

/// Run everything. Honours `GATHER_SIM_THREADS` for the worker count.
pub fn verify(options: &VerifyOptions) -> VerifyReport {
    let body = || {
        let sweep = sweep(options);
        let classes_found = if options.class_budget > 0 {
            find_classes(options)
        } else {
            BTreeMap::new()
        };
        let simulations = simulate(options);
        let passed = sweep.failures.is_empty()
            && simulations.failures.is_empty()
            && classes_found.values().all(Option::is_some)
            && sweep
                .expected_leader_counts
                .keys()
                .all(|k| (1..=2).contains(k));
        VerifyReport {
            options: options.clone(),
            sweep,
            classes_found,
            simulations,
            passed,
        }
    };
    match thread_pool() {
        Some(pool) => pool.install(body),
        None => body(),
    }
}

fn thread_pool() -> Option<rayon::ThreadPool> {
    let threads: usize = std::env::var("GATHER_SIM_THREADS").ok()?.parse().ok()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Statement;

    fn small(count: usize) -> VerifyOptions {
        VerifyOptions {
            count,
            class_budget: 0,
            n_max: 6,
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn empty_sweep_passes() {
        let r = verify(&small(0));
        assert!(r.passed);
        assert_eq!(r.sweep.checked, 0);
    }

    #[test]
    fn small_sweep_passes() {
        let r = verify(&small(40));
        assert!(r.passed, "{:?}", r.sweep.failures);
        assert_eq!(r.sweep.checked, 40);
    }

    #[test]
    fn flipped_leader_is_caught() {
        let r = verify(&VerifyOptions {
            mutant: Some(Mutant::FlipLeader),
            ..small(20)
        });
        assert!(!r.passed);
        assert!(r.sweep.failures.iter().any(|f| f.check == "leader-oracle"));
    }

    #[test]
    fn statement_names_are_stable() {
        assert_eq!(
            Statement::NoLeftPrefixTwin.to_string(),
            "no-left-prefix-twin"
        );
    }
}
