//! Randomized differential checks of the translation and the decision
//! procedures against explicit-state search.
//!
//! Every instance is generated from a seed derived from the suite's base seed
//! and the instance index, so a report can be reproduced exactly. Instances run
//! in parallel; results are always collected in index order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use iorbn_core::explicit::{self, ExploreError};
use iorbn_core::symbolic::{
    self, CrpAnswer, CrpQuery, SaturationCertificate, SymbolicError, UnboundedInitialCube,
};
use iorbn_core::translate::{io_to_rbn, TranslateError, TranslationCertificate};
use iorbn_core::{
    Configuration, IoNet, IoTransition, MessageId, ModelKind, Net, Rbn, RbnTransition, StateId,
    Trace, TransitionSystem,
};

use crate::format::{write_net, write_trace};
use crate::mutation::{self, Mutation, SelfObservingIoNet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid certificate: {0}")]
    Certificate(#[from] TranslateError),

    #[error(transparent)]
    Explore(#[from] ExploreError),

    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

impl HarnessError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            HarnessError::Explore(ExploreError::BudgetExceeded { .. })
                | HarnessError::Symbolic(SymbolicError::Explore(
                    ExploreError::BudgetExceeded { .. }
                ))
        )
    }
}

/// Parameters of one random net.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub seed: u64,
    pub num_states: RangeInclusive<usize>,
    pub num_transitions: RangeInclusive<usize>,
    pub kind: ModelKind,
}

impl GenSpec {
    fn check(&self) -> Result<(), HarnessError> {
        if self.num_states.is_empty() || self.num_transitions.is_empty() {
            return Err(HarnessError::InvalidSpec("empty range".into()));
        }
        if *self.num_states.start() == 0 {
            return Err(HarnessError::InvalidSpec(
                "nets need at least one state".into(),
            ));
        }
        Ok(())
    }
}

fn state_names(n: usize) -> Vec<StateId> {
    (0..n)
        .map(|i| StateId::new(&format!("q{i}")).unwrap())
        .collect()
}

/// A random IO net; the same spec always yields the same net.
pub fn gen_random_ionet(spec: &GenSpec) -> Result<IoNet, HarnessError> {
    if spec.kind != ModelKind::IoNet {
        return Err(HarnessError::InvalidSpec("kind must be ionet".into()));
    }
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = rng.random_range(spec.num_states.clone());
    let states = state_names(n);
    let universe = n * n * n;
    let k = rng.random_range(spec.num_transitions.clone()).min(universe);
    let mut picked = index::sample(&mut rng, universe, k).into_vec();
    picked.sort_unstable();
    let transitions = picked.into_iter().map(|i| {
        IoTransition::new(
            states[i / (n * n)].clone(),
            states[i / n % n].clone(),
            states[i % n].clone(),
        )
    });
    Ok(IoNet::new(states.clone(), transitions).expect("generated net is well formed"))
}

/// A random RBN; the alphabet has between one and `|Q|` messages.
pub fn gen_random_rbn(spec: &GenSpec) -> Result<Rbn, HarnessError> {
    if spec.kind != ModelKind::Rbn {
        return Err(HarnessError::InvalidSpec("kind must be rbn".into()));
    }
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = rng.random_range(spec.num_states.clone());
    let a = rng.random_range(1..=n);
    let states = state_names(n);
    let alphabet: Vec<MessageId> = (0..a)
        .map(|i| MessageId::new(&format!("m{i}")).unwrap())
        .collect();
    let universe = n * 2 * a * n;
    let k = rng.random_range(spec.num_transitions.clone()).min(universe);
    let mut picked = index::sample(&mut rng, universe, k).into_vec();
    picked.sort_unstable();
    let transitions = picked.into_iter().map(|i| {
        let target = states[i % n].clone();
        let message = alphabet[i / n % a].clone();
        let broadcast = i / (n * a) % 2 == 0;
        let source = states[i / (n * a * 2)].clone();
        if broadcast {
            RbnTransition::broadcast(source, message, target)
        } else {
            RbnTransition::receive(source, message, target)
        }
    });
    Ok(Rbn::new(states.clone(), alphabet.clone(), transitions)
        .expect("generated net is well formed"))
}

pub fn gen_random_net(spec: &GenSpec) -> Result<Net, HarnessError> {
    match spec.kind {
        ModelKind::IoNet => gen_random_ionet(spec).map(Net::Io),
        ModelKind::Rbn => gen_random_rbn(spec).map(Net::Rbn),
    }
}

/// A configuration of population `n` with each process placed uniformly.
pub fn random_config<R: Rng>(states: &[StateId], n: u32, rng: &mut R) -> Configuration {
    let mut c = Configuration::new();
    for _ in 0..n {
        c.add(&states[rng.random_range(0..states.len())], 1);
    }
    c
}

/// A nonempty random subset of `states`.
pub fn random_support<R: Rng>(states: &[StateId], rng: &mut R) -> BTreeSet<StateId> {
    let mut out: BTreeSet<StateId> = states
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect();
    if out.is_empty() {
        out.insert(states[rng.random_range(0..states.len())].clone());
    }
    out
}

/// Side of a reachability equivalence that holds while the other fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Reachable in the simulated instance, not in the simulating one.
    SourceOnly,
    /// Reachable in the simulating instance, not in the simulated one.
    TargetOnly,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::SourceOnly => "source-only",
            Direction::TargetOnly => "target-only",
        })
    }
}

/// A configuration reachable on exactly one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceCounterexample {
    pub initial: Configuration,
    /// In the coordinates of the side that reaches it.
    pub config: Configuration,
    pub direction: Direction,
    /// Run to `config` on the side that reaches it.
    pub witness: Option<Trace>,
}

/// Compares `post*` of `a` from `c0` with `post*` of `b` from the transported
/// `c0`.
pub fn check_equivalence<A, B>(
    a: &A,
    b: &B,
    cert: &TranslationCertificate,
    c0: &Configuration,
    budget: usize,
) -> Result<Option<EquivalenceCounterexample>, HarnessError>
where
    A: TransitionSystem + ?Sized,
    B: TransitionSystem + ?Sized,
{
    let b0 = cert.transport_config(c0)?;
    let ra = explicit::post_star(a, c0, budget)?;
    let rb = explicit::post_star(b, &b0, budget)?;
    for c in ra.reachable() {
        if !rb.contains(&cert.transport_config(c)?) {
            return Ok(Some(EquivalenceCounterexample {
                initial: c0.clone(),
                config: c.clone(),
                direction: Direction::SourceOnly,
                witness: ra.trace_to(c),
            }));
        }
    }
    for c in rb.reachable() {
        let back = cert.untransport_config(c).ok();
        if !back.is_some_and(|back| ra.contains(&back)) {
            return Ok(Some(EquivalenceCounterexample {
                initial: c0.clone(),
                config: c.clone(),
                direction: Direction::TargetOnly,
                witness: rb.trace_to(c),
            }));
        }
    }
    Ok(None)
}

/// `post*_N(c0)` against `post*` of the translated net.
pub fn check_translation_equivalence(
    net: &IoNet,
    c0: &Configuration,
    budget: usize,
) -> Result<Option<EquivalenceCounterexample>, HarnessError> {
    let (rbn, cert) = io_to_rbn(net);
    check_equivalence(net, &rbn, &cert, c0, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationMismatch {
    pub from: String,
    pub to: String,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationReport {
    pub instances_checked: usize,
    /// Pairs whose target is reachable in the simulated instance.
    pub reachable_pairs: usize,
    pub mismatches: Vec<SimulationMismatch>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

impl SimulationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(u64::try_from(d.as_millis()).unwrap_or(u64::MAX))
}

/// Certificate sanity before any search: the map is total on `a`, lands in
/// `b`, and the padding avoids its image.
pub fn validate_certificate(
    a_states: &[StateId],
    b_states: &[StateId],
    cert: &TranslationCertificate,
) -> Result<(), HarnessError> {
    cert.check_against(a_states, b_states)?;
    let image: BTreeSet<&StateId> = cert.state_map().values().collect();
    if let Some(q) = cert.padding().support().find(|q| image.contains(q)) {
        return Err(TranslateError::PaddingOverlap(q.clone()).into());
    }
    Ok(())
}

/// Tests `C' ∈ post*_A(C)  ⇔  map(C')·h ∈ post*_B(map(C)·h)` on each pair.
pub fn check_strong_simulation<A, B>(
    a: &A,
    b: &B,
    cert: &TranslationCertificate,
    pairs: &[(Configuration, Configuration)],
    budget: usize,
) -> Result<SimulationReport, HarnessError>
where
    A: TransitionSystem + ?Sized,
    B: TransitionSystem + ?Sized,
{
    let start = Instant::now();
    validate_certificate(a.states(), b.states(), cert)?;
    let mut cache_a = BTreeMap::new();
    let mut cache_b = BTreeMap::new();
    let mut mismatches = Vec::new();
    let mut reachable_pairs = 0;
    for (from, to) in pairs {
        if !cache_a.contains_key(from) {
            cache_a.insert(from.clone(), explicit::post_star(a, from, budget)?);
        }
        let from_b = cert.transport_config(from)?;
        if !cache_b.contains_key(&from_b) {
            let r = explicit::post_star(b, &from_b, budget)?;
            cache_b.insert(from_b.clone(), r);
        }
        let in_a = cache_a[from].contains(to);
        reachable_pairs += usize::from(in_a);
        let in_b = cache_b[&from_b].contains(&cert.transport_config(to)?);
        if in_a != in_b {
            mismatches.push(SimulationMismatch {
                from: from.to_string(),
                to: to.to_string(),
                direction: if in_a {
                    Direction::SourceOnly
                } else {
                    Direction::TargetOnly
                },
            });
        }
    }
    Ok(SimulationReport {
        instances_checked: pairs.len(),
        reachable_pairs,
        mismatches,
        elapsed: start.elapsed(),
    })
}

/// `count` pairs `(C, C')` of equal population at most `max_pop`; about half
/// of the targets are drawn from `post*_A(C)`, the rest uniformly.
pub fn sample_pairs<A, R>(
    a: &A,
    count: usize,
    max_pop: u32,
    rng: &mut R,
    budget: usize,
) -> Result<Vec<(Configuration, Configuration)>, HarnessError>
where
    A: TransitionSystem + ?Sized,
    R: Rng,
{
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.random_range(1..=max_pop);
        let from = random_config(a.states(), n, rng);
        let to = if rng.random_bool(0.5) {
            let reach: Vec<Configuration> = explicit::post_star(a, &from, budget)?
                .reachable()
                .cloned()
                .collect();
            reach[rng.random_range(0..reach.len())].clone()
        } else {
            random_config(a.states(), n, rng)
        };
        out.push((from, to));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaturationFailure {
    /// Covered by explicit search but missing from the saturation.
    Incomplete { state: StateId },
    /// In the saturation but without a valid witness run.
    NoWitness { state: StateId, reason: String },
    /// The certificate itself does not justify its entries.
    InvalidCertificate { reason: String },
}

impl fmt::Display for SaturationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaturationFailure::Incomplete { state } => {
                write!(f, "{state} is coverable but not saturated")
            }
            SaturationFailure::NoWitness { state, reason } => {
                write!(f, "{state} is saturated but has no witness: {reason}")
            }
            SaturationFailure::InvalidCertificate { reason } => f.write_str(reason),
        }
    }
}

type SaturateFn = fn(
    &Rbn,
    &UnboundedInitialCube,
) -> Result<(BTreeSet<StateId>, SaturationCertificate), SymbolicError>;

/// Checks [`symbolic::saturate`] against explicit coverability up to
/// `max_pop`, and every saturated state against its expanded witness.
pub fn check_saturation_against_oracle(
    net: &Rbn,
    support: &BTreeSet<StateId>,
    max_pop: u32,
    budget: usize,
) -> Result<Option<SaturationFailure>, HarnessError> {
    check_saturation_with(net, support, max_pop, budget, symbolic::saturate)
}

/// As [`check_saturation_against_oracle`], with the saturation procedure
/// supplied by the caller.
pub fn check_saturation_with(
    net: &Rbn,
    support: &BTreeSet<StateId>,
    max_pop: u32,
    budget: usize,
    saturate: SaturateFn,
) -> Result<Option<SaturationFailure>, HarnessError> {
    let init = UnboundedInitialCube::new(support.iter().cloned());
    let explicit = explicit::coverable_states_explicit(net, support, max_pop, budget)?;
    let (covered, cert) = saturate(net, &init)?;
    if let Some(q) = explicit.difference(&covered).next() {
        return Ok(Some(SaturationFailure::Incomplete { state: q.clone() }));
    }
    // Expanding no targets only validates the certificate.
    if let Err(e) = symbolic::expand_witness(net, &init, &cert, &BTreeSet::new()) {
        let reason = e.to_string();
        return Ok(Some(SaturationFailure::InvalidCertificate { reason }));
    }
    for q in &covered {
        let no_witness = |reason: String| {
            Ok(Some(SaturationFailure::NoWitness {
                state: q.clone(),
                reason,
            }))
        };
        let trace =
            match symbolic::expand_witness(net, &init, &cert, &[q.clone()].into_iter().collect()) {
                Ok(t) => t,
                Err(e) => return no_witness(e.to_string()),
            };
        if let Err(e) = trace.replay(net) {
            return no_witness(e.to_string());
        }
        if trace.initial.support().any(|p| !support.contains(p)) {
            return no_witness(format!("starts outside the support at {}", trace.initial));
        }
        if trace.final_config().get(q) == 0 {
            return no_witness(format!("ends in {}", trace.final_config()));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrpFailure {
    /// The YES witness is not a run of the net from the initial cube into the
    /// target.
    BadWitness { reason: String, trace: Trace },
    /// The decision said NO, bounded search found a run.
    Contradicted { trace: Trace },
}

impl fmt::Display for CrpFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrpFailure::BadWitness { reason, .. } => write!(f, "bad YES witness: {reason}"),
            CrpFailure::Contradicted { .. } => {
                f.write_str("NO answer contradicted by bounded search")
            }
        }
    }
}

/// Checks [`symbolic::io_crp_decide`] on `net` against bounded search over
/// `oracle_pops`.
pub fn check_io_crp_against_oracle(
    net: &IoNet,
    init: &UnboundedInitialCube,
    query: &CrpQuery,
    oracle_pops: RangeInclusive<u32>,
    budget: usize,
) -> Result<Option<CrpFailure>, HarnessError> {
    check_io_crp_counted(net, init, query, oracle_pops, budget).map(|(_, failure)| failure)
}

/// As [`check_io_crp_against_oracle`], also naming the answer checked.
fn check_io_crp_counted(
    net: &IoNet,
    init: &UnboundedInitialCube,
    query: &CrpQuery,
    oracle_pops: RangeInclusive<u32>,
    budget: usize,
) -> Result<(&'static str, Option<CrpFailure>), HarnessError> {
    let answer = symbolic::io_crp_decide(net, init, query, None, budget)?;
    let label = match answer {
        CrpAnswer::Yes(_) => "yes",
        CrpAnswer::No => "no",
        CrpAnswer::NoAtBounds => "no-at-bounds",
    };
    let failure = match answer {
        CrpAnswer::Yes(trace) => {
            let reason = if let Err(e) = trace.replay(net) {
                Some(e.to_string())
            } else if !init.to_cube().contains(&trace.initial) {
                Some(format!(
                    "initial {} outside the initial cube",
                    trace.initial
                ))
            } else if !query.target_cube().contains(trace.final_config()) {
                Some(format!("final {} outside the target", trace.final_config()))
            } else {
                None
            };
            reason.map(|reason| CrpFailure::BadWitness { reason, trace })
        }
        CrpAnswer::No => match symbolic::crp_bounded(net, init, query, oracle_pops, budget)? {
            CrpAnswer::Yes(trace) => Some(CrpFailure::Contradicted { trace }),
            _ => None,
        },
        CrpAnswer::NoAtBounds => None,
    };
    Ok((label, failure))
}

/// Seed of instance `index` of suite `suite` under base seed `base`.
pub fn instance_seed(base: u64, suite: u64, index: usize) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }
    splitmix(splitmix(base ^ suite.wrapping_mul(0x2545_f491_4f6c_dd1d)).wrapping_add(index as u64))
}

/// Size of a corpus run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub seed: u64,
    pub instances: usize,
    pub budget: usize,
}

impl Corpus {
    pub fn new(seed: u64, instances: usize) -> Self {
        Self {
            seed,
            instances,
            budget: explicit::DEFAULT_BUDGET,
        }
    }

    fn spec(&self, suite: Suite, index: usize) -> GenSpec {
        let (num_states, num_transitions, kind) = match suite {
            Suite::Saturation => (2..=6, 0..=10, ModelKind::Rbn),
            _ => (2..=4, 0..=6, ModelKind::IoNet),
        };
        GenSpec {
            seed: instance_seed(self.seed, suite as u64, index),
            num_states,
            num_transitions,
            kind,
        }
    }
}

/// Largest initial population of the equivalence, saturation and simulation
/// suites.
pub const MAX_POPULATION: u32 = 4;
/// Largest population the CRP oracle searches.
pub const CRP_ORACLE_POPULATION: u32 = 6;
/// Sampled pairs per simulation instance.
pub const PAIRS_PER_INSTANCE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Equivalence = 1,
    Saturation = 2,
    IoCrp = 3,
    Simulation = 4,
    RoundTrip = 5,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Equivalence => "equivalence",
            Suite::Saturation => "saturation",
            Suite::IoCrp => "io-crp",
            Suite::Simulation => "simulation",
            Suite::RoundTrip => "round-trip",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub index: usize,
    pub seed: u64,
    pub summary: String,
    /// Net file text followed by commented details; parses as a net.
    #[serde(skip)]
    pub replay: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub base_seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    /// Breakdown of what the checks saw, such as YES and NO answers.
    pub tally: BTreeMap<&'static str, usize>,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} seed={} instances={} checks={} failures={} elapsed_ms={} {}",
            self.suite,
            self.base_seed,
            self.instances,
            self.checks,
            self.failures.len(),
            self.elapsed.as_millis(),
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        if !self.tally.is_empty() {
            let parts: Vec<String> = self.tally.iter().map(|(k, n)| format!("{k}={n}")).collect();
            writeln!(f, "tally {} {}", self.suite, parts.join(" "))?;
        }
        for failure in &self.failures {
            writeln!(
                f,
                "failure {} #{} seed={}: {}",
                self.suite, failure.index, failure.seed, failure.summary
            )?;
            f.write_str(&failure.replay)?;
        }
        Ok(())
    }
}

fn commented(label: &str, text: &str) -> String {
    text.lines().fold(String::new(), |mut out, l| {
        writeln!(out, "# {label}{l}").unwrap();
        out
    })
}

fn replay_block(net: &Net, details: &[(&str, String)]) -> String {
    let mut out = write_net(net);
    for (label, text) in details {
        out.push_str(&commented(label, text));
    }
    out
}

#[derive(Default)]
struct Outcome {
    checks: usize,
    failure: Option<(String, String)>,
    /// Counted into the report's tally.
    tally: Vec<(&'static str, usize)>,
}

fn run_suite<F>(suite: Suite, corpus: &Corpus, check: F) -> Result<SuiteReport, HarnessError>
where
    F: Fn(&GenSpec) -> Result<Outcome, HarnessError> + Sync,
{
    let start = Instant::now();
    let outcomes: Vec<(GenSpec, Result<Outcome, HarnessError>)> = (0..corpus.instances)
        .into_par_iter()
        .map(|i| {
            let spec = corpus.spec(suite, i);
            let r = check(&spec);
            (spec, r)
        })
        .collect();
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut tally = BTreeMap::new();
    for (index, (spec, outcome)) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        checks += outcome.checks;
        for (key, n) in outcome.tally {
            *tally.entry(key).or_insert(0) += n;
        }
        if let Some((summary, replay)) = outcome.failure {
            failures.push(Failure {
                index,
                seed: spec.seed,
                summary,
                replay,
            });
        }
    }
    Ok(SuiteReport {
        suite,
        base_seed: corpus.seed,
        instances: corpus.instances,
        checks,
        failures,
        tally,
        elapsed: start.elapsed(),
    })
}

/// Every configuration over `states` with population at most `max_pop`.
pub fn configs_up_to(states: &[StateId], max_pop: u32) -> Vec<Configuration> {
    let any = states.iter().fold(iorbn_core::Cube::initial(), |c, q| {
        c.with(q.clone(), iorbn_core::Interval::ANY)
    });
    (0..=max_pop)
        .flat_map(|n| explicit::cube_configs(states, &any, n))
        .collect()
}

fn equivalence_instance<A, B>(
    shown: &Net,
    a: &A,
    b: &B,
    cert: &TranslationCertificate,
    budget: usize,
) -> Result<Outcome, HarnessError>
where
    A: TransitionSystem + ?Sized,
    B: TransitionSystem + ?Sized,
{
    let mut checks = 0;
    for c0 in configs_up_to(a.states(), MAX_POPULATION) {
        checks += 1;
        if let Some(cx) = check_equivalence(a, b, cert, &c0, budget)? {
            let summary = format!(
                "{} reachable from {} on the {} side only",
                cx.config,
                cx.initial,
                match cx.direction {
                    Direction::SourceOnly => "ionet",
                    Direction::TargetOnly => "rbn",
                }
            );
            let mut details = vec![
                ("initial ", cx.initial.to_string()),
                ("offending ", cx.config.to_string()),
                ("direction ", cx.direction.to_string()),
            ];
            if let Some(w) = &cx.witness {
                details.push(("", write_trace(w)));
            }
            return Ok(Outcome {
                checks,
                failure: Some((summary, replay_block(shown, &details))),
                ..Outcome::default()
            });
        }
    }
    Ok(Outcome {
        checks,
        ..Outcome::default()
    })
}

/// Checks that `post*` agrees between each net and its translation from every
/// initial configuration of population at most [`MAX_POPULATION`].
pub fn equivalence_suite(corpus: &Corpus) -> Result<SuiteReport, HarnessError> {
    run_suite(Suite::Equivalence, corpus, |spec| {
        let net = gen_random_ionet(spec)?;
        let (rbn, cert) = io_to_rbn(&net);
        equivalence_instance(&Net::Io(net.clone()), &net, &rbn, &cert, corpus.budget)
    })
}

fn saturation_instance(
    spec: &GenSpec,
    budget: usize,
    saturate: SaturateFn,
) -> Result<Outcome, HarnessError> {
    let net = gen_random_rbn(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5a5a);
    let support = random_support(net.states(), &mut rng);
    let failure =
        check_saturation_with(&net, &support, MAX_POPULATION, budget, saturate)?.map(|f| {
            let names: Vec<String> = support.iter().map(ToString::to_string).collect();
            (
                f.to_string(),
                replay_block(&Net::Rbn(net.clone()), &[("support ", names.join(" "))]),
            )
        });
    Ok(Outcome {
        checks: 1,
        failure,
        ..Outcome::default()
    })
}

/// Checks that saturation contains explicit coverability up to
/// [`MAX_POPULATION`] and every saturated state has a replayable witness.
pub fn saturation_suite(corpus: &Corpus) -> Result<SuiteReport, HarnessError> {
    run_suite(Suite::Saturation, corpus, |spec| {
        saturation_instance(spec, corpus.budget, symbolic::saturate)
    })
}

/// Checks that `#q>=1` answers on IO nets agree with bounded search up to
/// [`CRP_ORACLE_POPULATION`].
pub fn io_crp_suite(corpus: &Corpus) -> Result<SuiteReport, HarnessError> {
    run_suite(Suite::IoCrp, corpus, |spec| {
        let net = gen_random_ionet(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0xc0c0);
        let init = UnboundedInitialCube::new(random_support(net.states(), &mut rng));
        let k = rng.random_range(1..=2.min(net.states().len()));
        let present = index::sample(&mut rng, net.states().len(), k)
            .into_iter()
            .map(|i| net.states()[i].clone());
        let query = CrpQuery::geq1(present);
        let (label, failure) = check_io_crp_counted(
            &net,
            &init,
            &query,
            1..=CRP_ORACLE_POPULATION,
            corpus.budget,
        )?;
        let failure = failure.map(|f| {
            let trace = match &f {
                CrpFailure::BadWitness { trace, .. } | CrpFailure::Contradicted { trace } => trace,
            };
            let names: Vec<String> = init.support().iter().map(ToString::to_string).collect();
            let details = [
                (
                    "query ",
                    format!("init: {} ; target: {query}", names.join(" ")),
                ),
                ("", write_trace(trace)),
            ];
            (f.to_string(), replay_block(&Net::Io(net.clone()), &details))
        });
        Ok(Outcome {
            checks: 1,
            failure,
            tally: vec![(label, 1)],
        })
    })
}

/// Checks strong simulation of each net by its translation on
/// [`PAIRS_PER_INSTANCE`] sampled pairs.
pub fn simulation_suite(corpus: &Corpus) -> Result<SuiteReport, HarnessError> {
    run_suite(Suite::Simulation, corpus, |spec| {
        let net = gen_random_ionet(spec)?;
        let (rbn, cert) = io_to_rbn(&net);
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ 0x5151);
        let pairs = sample_pairs(
            &net,
            PAIRS_PER_INSTANCE,
            MAX_POPULATION,
            &mut rng,
            corpus.budget,
        )?;
        let report = check_strong_simulation(&net, &rbn, &cert, &pairs, corpus.budget)?;
        let failure = report.mismatches.first().map(|m| {
            let details = [
                ("from ", m.from.clone()),
                ("to ", m.to.clone()),
                ("direction ", m.direction.to_string()),
            ];
            (
                format!(
                    "{} mismatches, first {} -> {} ({})",
                    report.mismatches.len(),
                    m.from,
                    m.to,
                    m.direction
                ),
                replay_block(&Net::Io(net.clone()), &details),
            )
        });
        Ok(Outcome {
            checks: report.instances_checked,
            failure,
            tally: vec![
                ("reachable", report.reachable_pairs),
                (
                    "unreachable",
                    report.instances_checked - report.reachable_pairs,
                ),
            ],
        })
    })
}

/// Checks that every generated net, of either kind, survives
/// `parse_net(write_net(_))`.
pub fn round_trip_suite(corpus: &Corpus) -> Result<SuiteReport, HarnessError> {
    run_suite(Suite::RoundTrip, corpus, |spec| {
        let mut checks = 0;
        for kind in [ModelKind::IoNet, ModelKind::Rbn] {
            let spec = GenSpec {
                kind,
                num_states: 1..=6,
                num_transitions: 0..=10,
                ..spec.clone()
            };
            let net = gen_random_net(&spec)?;
            let text = write_net(&net);
            checks += 1;
            match crate::format::parse_net(&text) {
                Ok(back) if back == net => {}
                Ok(_) => {
                    return Ok(Outcome {
                        checks,
                        tally: Vec::new(),
                        failure: Some(("re-parsed net differs".into(), text)),
                    })
                }
                Err(e) => {
                    return Ok(Outcome {
                        checks,
                        tally: Vec::new(),
                        failure: Some((format!("re-parse failed: {e}"), text)),
                    })
                }
            }
        }
        Ok(Outcome {
            checks,
            ..Outcome::default()
        })
    })
}

/// Whether a mutant was told apart from the real implementation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationReport {
    pub mutation: Mutation,
    pub caught: bool,
    /// First instance, in index order, exposing the mutant.
    pub index: Option<usize>,
    pub seed: Option<u64>,
    pub summary: Option<String>,
    #[serde(skip)]
    pub replay: Option<String>,
}

impl fmt::Display for MutationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.caught, self.index, &self.summary) {
            (true, Some(i), Some(s)) => writeln!(
                f,
                "mutation {} caught at #{i} seed={}: {s}",
                self.mutation,
                self.seed.unwrap_or_default()
            ),
            _ => writeln!(f, "mutation {} NOT caught", self.mutation),
        }
    }
}

/// Runs the corpus suite that should expose `mutation` with the mutant in
/// place of the real component.
pub fn mutation_check(mutation: Mutation, corpus: &Corpus) -> Result<MutationReport, HarnessError> {
    let (suite, outcome) = match mutation {
        Mutation::DropReceive => (
            Suite::Equivalence,
            run_suite(Suite::Equivalence, corpus, |spec| {
                let net = gen_random_ionet(spec)?;
                let (rbn, cert) = io_to_rbn(&net);
                match mutation::drop_receive(&rbn) {
                    Some(mutant) => equivalence_instance(
                        &Net::Rbn(mutant.clone()),
                        &net,
                        &mutant,
                        &cert,
                        corpus.budget,
                    ),
                    None => Ok(Outcome::default()),
                }
            })?,
        ),
        Mutation::UnguardedReceive => (
            Suite::Saturation,
            run_suite(Suite::Saturation, corpus, |spec| {
                saturation_instance(spec, corpus.budget, mutation::saturate_unguarded)
            })?,
        ),
        Mutation::SelfObservation => (
            Suite::Equivalence,
            run_suite(Suite::Equivalence, corpus, |spec| {
                let net = gen_random_ionet(spec)?;
                let (rbn, cert) = io_to_rbn(&net);
                equivalence_instance(
                    &Net::Io(net.clone()),
                    &SelfObservingIoNet(net),
                    &rbn,
                    &cert,
                    corpus.budget,
                )
            })?,
        ),
    };
    debug_assert_eq!(suite, outcome.suite);
    let first = outcome.failures.into_iter().next();
    Ok(MutationReport {
        mutation,
        caught: first.is_some(),
        index: first.as_ref().map(|f| f.index),
        seed: first.as_ref().map(|f| f.seed),
        summary: first.as_ref().map(|f| f.summary.clone()),
        replay: first.map(|f| f.replay),
    })
}

/// Everything `validate` runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub instances: usize,
    pub suites: Vec<SuiteReport>,
    pub mutations: Vec<MutationReport>,
    pub passed: bool,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            write!(f, "{s}")?;
        }
        for m in &self.mutations {
            write!(f, "{m}")?;
        }
        writeln!(f, "result {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

impl ValidationReport {
    /// One-line JSON summary with counts and seeds.
    pub fn summary_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// All suites and mutation checks on one corpus.
pub fn validate(corpus: &Corpus) -> Result<ValidationReport, HarnessError> {
    let suites = vec![
        equivalence_suite(corpus)?,
        saturation_suite(corpus)?,
        io_crp_suite(corpus)?,
        simulation_suite(corpus)?,
        round_trip_suite(corpus)?,
    ];
    let mutations = Mutation::ALL
        .into_iter()
        .map(|m| mutation_check(m, corpus))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = suites.iter().all(SuiteReport::passed) && mutations.iter().all(|m| m.caught);
    Ok(ValidationReport {
        seed: corpus.seed,
        instances: corpus.instances,
        suites,
        mutations,
        passed,
    })
}
