//! Population-independent cardinality reachability.
//!
//! Queries start from an unbounded initial cube: any number of processes in
//! each supported state. For targets of the form "at least one process in each
//! of `T+`" the answer only depends on which states are coverable, and with
//! unboundedly many copies available these are the least fixpoint of three
//! rules:
//!
//! * supported states are coverable;
//! * if `q` is coverable and `q !m -> q'`, then `q'` is coverable;
//! * if `p` is coverable, `p ?m -> p'`, and some coverable `q` has a broadcast
//!   of `m`, then `p'` is coverable.
//!
//! Each state added records the rule that added it, and [`expand_witness`]
//! turns these records into a concrete run. Targets that also require some
//! states to be empty are handled by bounded explicit search, which can answer
//! "yes" with a witness or "no witness up to this population", never "no".

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::explicit::{self, BoundedOutcome, ExploreError};
use crate::translate::{self, TranslateError};
use crate::{
    Configuration, Cube, Interval, IoNet, MessageId, Rbn, RbnStep, RbnTransition, StateId, Step,
    StepError, Trace, TransitionSystem,
};

/// Upper limit on the initial population of an expanded witness.
pub const WITNESS_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("state {0} does not belong to the net")]
    UnknownState(StateId),

    #[error("state {0} is required both present and absent")]
    ContradictoryAtom(StateId),

    #[error("query kind is not supported by this procedure")]
    WrongKind,

    #[error("target {0} is not in the saturated set")]
    TargetNotCovered(StateId),

    #[error("invalid saturation certificate: {0}")]
    InvalidCertificate(String),

    #[error("witness would need more than {WITNESS_LIMIT} processes")]
    WitnessTooLarge,

    #[error("witness replay failed: {0}")]
    Replay(StepError),

    #[error(transparent)]
    Explore(#[from] ExploreError),

    #[error(transparent)]
    Translate(#[from] TranslateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrpKind {
    /// Only "at least one" atoms.
    Geq1,
    /// "At least one" and "exactly zero" atoms.
    Geq1Eq0,
}

/// A target made of `#q>=1` atoms (`must_be_present`) and `#q=0` atoms
/// (`must_be_absent`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrpQuery {
    kind: CrpKind,
    must_be_present: BTreeSet<StateId>,
    must_be_absent: BTreeSet<StateId>,
}

impl CrpQuery {
    pub fn geq1<I: IntoIterator<Item = StateId>>(present: I) -> Self {
        Self {
            kind: CrpKind::Geq1,
            must_be_present: present.into_iter().collect(),
            must_be_absent: BTreeSet::new(),
        }
    }

    /// The kind is [`CrpKind::Geq1`] when `absent` is empty.
    pub fn new<P, A>(present: P, absent: A) -> Result<Self, SymbolicError>
    where
        P: IntoIterator<Item = StateId>,
        A: IntoIterator<Item = StateId>,
    {
        let must_be_present: BTreeSet<_> = present.into_iter().collect();
        let must_be_absent: BTreeSet<_> = absent.into_iter().collect();
        if let Some(q) = must_be_present.intersection(&must_be_absent).next() {
            return Err(SymbolicError::ContradictoryAtom(q.clone()));
        }
        let kind = if must_be_absent.is_empty() {
            CrpKind::Geq1
        } else {
            CrpKind::Geq1Eq0
        };
        Ok(Self {
            kind,
            must_be_present,
            must_be_absent,
        })
    }

    pub fn kind(&self) -> CrpKind {
        self.kind
    }

    pub fn must_be_present(&self) -> &BTreeSet<StateId> {
        &self.must_be_present
    }

    pub fn must_be_absent(&self) -> &BTreeSet<StateId> {
        &self.must_be_absent
    }

    /// `T+` to `[1,∞]`, `T0` to `[0,0]`, everything else `[0,∞]`.
    pub fn target_cube(&self) -> Cube {
        let cube = self.must_be_present.iter().fold(Cube::target(), |c, q| {
            c.with(q.clone(), Interval::AT_LEAST_ONE)
        });
        self.must_be_absent
            .iter()
            .fold(cube, |c, q| c.with(q.clone(), Interval::ZERO))
    }

    fn states(&self) -> impl Iterator<Item = &StateId> {
        self.must_be_present.iter().chain(&self.must_be_absent)
    }
}

/// Initial configurations with arbitrarily many processes in each supported
/// state and none elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UnboundedInitialCube {
    support: BTreeSet<StateId>,
}

impl UnboundedInitialCube {
    pub fn new<I: IntoIterator<Item = StateId>>(support: I) -> Self {
        Self {
            support: support.into_iter().collect(),
        }
    }

    pub fn support(&self) -> &BTreeSet<StateId> {
        &self.support
    }

    pub fn to_cube(&self) -> Cube {
        self.support
            .iter()
            .fold(Cube::initial(), |c, q| c.with(q.clone(), Interval::ANY))
    }
}

/// Why a state entered the saturated set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Init,
    /// The state is the target of a broadcast from an earlier state.
    BroadcastFrom(RbnTransition),
    /// The state is the target of a reception from an earlier state, enabled
    /// by a broadcast of the same message from an earlier state.
    ReceiveUsing {
        receive: RbnTransition,
        broadcast: RbnTransition,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertEntry {
    pub state: StateId,
    pub rule: Rule,
}

/// The saturated set in the order states were added, with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SaturationCertificate {
    order: Vec<CertEntry>,
}

impl SaturationCertificate {
    pub fn new(order: Vec<CertEntry>) -> Self {
        Self { order }
    }

    pub fn entries(&self) -> &[CertEntry] {
        &self.order
    }

    pub fn states(&self) -> BTreeSet<StateId> {
        self.order.iter().map(|e| e.state.clone()).collect()
    }

    pub fn entry(&self, q: &StateId) -> Option<&CertEntry> {
        self.order.iter().find(|e| &e.state == q)
    }
}

fn check_net_states<'a>(
    net: &Rbn,
    states: impl IntoIterator<Item = &'a StateId>,
) -> Result<(), SymbolicError> {
    match states.into_iter().find(|q| !net.has_state(q)) {
        Some(q) => Err(SymbolicError::UnknownState(q.clone())),
        None => Ok(()),
    }
}

/// Computes the states coverable from `init` with unboundedly many processes.
pub fn saturate(
    net: &Rbn,
    init: &UnboundedInitialCube,
) -> Result<(BTreeSet<StateId>, SaturationCertificate), SymbolicError> {
    check_net_states(net, &init.support)?;

    let mut covered = BTreeSet::new();
    let mut order = Vec::new();
    // First broadcast of each message whose sender is already covered.
    let mut announced: BTreeMap<MessageId, RbnTransition> = BTreeMap::new();
    let mut add = |q: &StateId,
                   rule: Rule,
                   covered: &mut BTreeSet<StateId>,
                   announced: &mut BTreeMap<MessageId, RbnTransition>| {
        covered.insert(q.clone());
        order.push(CertEntry {
            state: q.clone(),
            rule,
        });
        for b in net.broadcasts().filter(|b| &b.source == q) {
            announced
                .entry(b.message().clone())
                .or_insert_with(|| b.clone());
        }
    };

    for q in net.states().iter().filter(|q| init.support.contains(*q)) {
        add(q, Rule::Init, &mut covered, &mut announced);
    }
    loop {
        let mut changed = false;
        for t in net.transitions() {
            if covered.contains(&t.target) || !covered.contains(&t.source) {
                continue;
            }
            let rule = if t.action.is_broadcast() {
                Rule::BroadcastFrom(t.clone())
            } else if let Some(b) = announced.get(t.message()) {
                Rule::ReceiveUsing {
                    receive: t.clone(),
                    broadcast: b.clone(),
                }
            } else {
                continue;
            };
            add(&t.target, rule, &mut covered, &mut announced);
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok((covered, SaturationCertificate { order }))
}

/// Checks that every entry's premises were added earlier and that its
/// transitions belong to `net`.
fn check_certificate(
    net: &Rbn,
    init: &UnboundedInitialCube,
    cert: &SaturationCertificate,
) -> Result<(), SymbolicError> {
    let invalid = |what: String| Err(SymbolicError::InvalidCertificate(what));
    let mut seen = BTreeSet::new();
    for e in &cert.order {
        let premises: Vec<&StateId> = match &e.rule {
            Rule::Init => {
                if !init.support.contains(&e.state) {
                    return invalid(alloc::format!("{} is not in the initial support", e.state));
                }
                Vec::new()
            }
            Rule::BroadcastFrom(t) => {
                if !t.action.is_broadcast() || t.target != e.state || !net.has_transition(t) {
                    return invalid(alloc::format!("{t} does not produce {}", e.state));
                }
                alloc::vec![&t.source]
            }
            Rule::ReceiveUsing { receive, broadcast } => {
                if receive.action.is_broadcast()
                    || !broadcast.action.is_broadcast()
                    || receive.message() != broadcast.message()
                    || receive.target != e.state
                    || !net.has_transition(receive)
                    || !net.has_transition(broadcast)
                {
                    return invalid(alloc::format!(
                        "{receive} enabled by {broadcast} does not produce {}",
                        e.state
                    ));
                }
                alloc::vec![&receive.source, &broadcast.source]
            }
        };
        if let Some(p) = premises.into_iter().find(|p| !seen.contains(*p)) {
            return invalid(alloc::format!("{} uses {p} before it is covered", e.state));
        }
        if !seen.insert(e.state.clone()) {
            return invalid(alloc::format!("{} appears twice", e.state));
        }
    }
    Ok(())
}

/// Turns a certificate into a run that ends with at least one process in every
/// target.
///
/// Every use of a certificate entry gets its own fresh processes: a state
/// added by `BroadcastFrom` is realized by realizing the sender's state and
/// broadcasting; a state added by `ReceiveUsing` by realizing the receiver's
/// and the sender's states with separate processes and broadcasting to the
/// single receiver. Processes are never shared, so steps of different
/// sub-runs cannot interfere.
pub fn expand_witness(
    net: &Rbn,
    init: &UnboundedInitialCube,
    cert: &SaturationCertificate,
    targets: &BTreeSet<StateId>,
) -> Result<Trace, SymbolicError> {
    check_certificate(net, init, cert)?;
    let entries: BTreeMap<&StateId, &CertEntry> =
        cert.order.iter().map(|e| (&e.state, e)).collect();
    if let Some(q) = targets.iter().find(|q| !entries.contains_key(q)) {
        return Err(SymbolicError::TargetNotCovered(q.clone()));
    }

    // Processes needed per state, in certificate order.
    let mut cost: BTreeMap<&StateId, u64> = BTreeMap::new();
    for e in &cert.order {
        let c = match &e.rule {
            Rule::Init => 1,
            Rule::BroadcastFrom(t) => cost[&t.source],
            Rule::ReceiveUsing { receive, broadcast } => {
                cost[&receive.source].saturating_add(cost[&broadcast.source])
            }
        };
        cost.insert(&e.state, c);
    }
    let total = targets
        .iter()
        .fold(0u64, |acc, q| acc.saturating_add(cost[q]));
    if total > WITNESS_LIMIT {
        return Err(SymbolicError::WitnessTooLarge);
    }

    fn realize(
        q: &StateId,
        entries: &BTreeMap<&StateId, &CertEntry>,
        initial: &mut Configuration,
        steps: &mut Vec<RbnStep>,
    ) {
        match &entries[q].rule {
            Rule::Init => initial.add(q, 1),
            Rule::BroadcastFrom(t) => {
                realize(&t.source, entries, initial, steps);
                steps.push(RbnStep::new(t.clone(), Vec::new()));
            }
            Rule::ReceiveUsing { receive, broadcast } => {
                realize(&receive.source, entries, initial, steps);
                realize(&broadcast.source, entries, initial, steps);
                steps.push(RbnStep::new(
                    broadcast.clone(),
                    alloc::vec![receive.clone()],
                ));
            }
        }
    }

    let mut initial = Configuration::new();
    let mut steps = Vec::new();
    for q in targets {
        realize(q, &entries, &mut initial, &mut steps);
    }
    let mut trace = Trace::empty(initial);
    for step in steps {
        trace
            .push(net, Step::Broadcast(step))
            .map_err(SymbolicError::Replay)?;
    }
    Ok(trace)
}

/// Answer of a cardinality reachability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrpAnswer {
    /// Reachable, with a run from the initial cube into the target.
    Yes(Trace),
    /// Unreachable at every population.
    No,
    /// No witness within the explored populations; inconclusive.
    NoAtBounds,
}

impl CrpAnswer {
    pub fn is_yes(&self) -> bool {
        matches!(self, CrpAnswer::Yes(_))
    }
}

/// Decides a `#q>=1` query by saturation. A `No` holds for every population.
pub fn crp_geq1_decide(
    net: &Rbn,
    init: &UnboundedInitialCube,
    query: &CrpQuery,
) -> Result<CrpAnswer, SymbolicError> {
    if query.kind != CrpKind::Geq1 {
        return Err(SymbolicError::WrongKind);
    }
    check_net_states(net, query.states())?;
    let (covered, cert) = saturate(net, init)?;
    if query.must_be_present.is_subset(&covered) {
        Ok(CrpAnswer::Yes(expand_witness(
            net,
            init,
            &cert,
            &query.must_be_present,
        )?))
    } else {
        Ok(CrpAnswer::No)
    }
}

/// Population range searched by default for queries with `#q=0` atoms: from
/// the number of required states up to twice the number of states.
pub fn default_populations(num_states: usize, query: &CrpQuery) -> RangeInclusive<u32> {
    let start = u32::try_from(query.must_be_present.len()).unwrap_or(u32::MAX);
    let end = u32::try_from(2 * num_states).unwrap_or(u32::MAX).max(start);
    start..=end
}

/// Bounded explicit search for any query kind on any model. Never answers
/// `No`.
pub fn crp_bounded<S>(
    sys: &S,
    init: &UnboundedInitialCube,
    query: &CrpQuery,
    populations: RangeInclusive<u32>,
    budget: usize,
) -> Result<CrpAnswer, SymbolicError>
where
    S: TransitionSystem + ?Sized,
{
    let from = init.to_cube();
    let to = query.target_cube();
    match explicit::reach_bounded(sys, &from, &to, populations, budget)? {
        BoundedOutcome::Reachable(trace) => Ok(CrpAnswer::Yes(trace)),
        BoundedOutcome::NoAtBounds { .. } => Ok(CrpAnswer::NoAtBounds),
    }
}

/// Bounded search for a `#q>=1` / `#q=0` query on an RBN.
pub fn crp_geq1_eq0_bounded(
    net: &Rbn,
    init: &UnboundedInitialCube,
    query: &CrpQuery,
    populations: RangeInclusive<u32>,
    budget: usize,
) -> Result<CrpAnswer, SymbolicError> {
    if query.kind != CrpKind::Geq1Eq0 {
        return Err(SymbolicError::WrongKind);
    }
    crp_bounded(net, init, query, populations, budget)
}

/// Decides a query on an IO net through its RBN translation.
///
/// `#q>=1` queries are decided by saturation; queries with `#q=0` atoms by
/// bounded search over `populations` (default: [`default_populations`]).
/// Witnesses are mapped back to runs of `net`.
pub fn io_crp_decide(
    net: &IoNet,
    init: &UnboundedInitialCube,
    query: &CrpQuery,
    populations: Option<RangeInclusive<u32>>,
    budget: usize,
) -> Result<CrpAnswer, SymbolicError> {
    let (rbn, cert) = translate::io_to_rbn(net);
    let map_all = |states: &BTreeSet<StateId>| -> Result<Vec<StateId>, SymbolicError> {
        states
            .iter()
            .map(|q| {
                cert.map_state(q)
                    .cloned()
                    .map_err(|_| SymbolicError::UnknownState(q.clone()))
            })
            .collect()
    };
    let rbn_init = UnboundedInitialCube::new(map_all(&init.support)?);
    let rbn_query = CrpQuery::new(
        map_all(&query.must_be_present)?,
        map_all(&query.must_be_absent)?,
    )?;

    let answer = match query.kind {
        CrpKind::Geq1 => crp_geq1_decide(&rbn, &rbn_init, &rbn_query)?,
        CrpKind::Geq1Eq0 => {
            let pops =
                populations.unwrap_or_else(|| default_populations(rbn.states().len(), &rbn_query));
            crp_geq1_eq0_bounded(&rbn, &rbn_init, &rbn_query, pops, budget)?
        }
    };
    match answer {
        CrpAnswer::Yes(trace) => Ok(CrpAnswer::Yes(translate::rbn_trace_to_io(
            net, &cert, &trace,
        )?)),
        other => Ok(other),
    }
}

impl core::fmt::Display for CrpKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            CrpKind::Geq1 => "CRP[>=1]",
            CrpKind::Geq1Eq0 => "CRP[>=1,=0]",
        })
    }
}

impl core::fmt::Display for CrpQuery {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let atoms: Vec<String> = self
            .must_be_present
            .iter()
            .map(|q| alloc::format!("#{q}>=1"))
            .chain(self.must_be_absent.iter().map(|q| alloc::format!("#{q}=0")))
            .collect();
        f.write_str(&atoms.join(" & "))
    }
}

impl core::fmt::Display for Rule {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Rule::Init => f.write_str("init"),
            Rule::BroadcastFrom(t) => write!(f, "broadcast {t}"),
            Rule::ReceiveUsing { receive, broadcast } => {
                write!(f, "receive {receive} using {broadcast}")
            }
        }
    }
}

impl core::fmt::Display for SaturationCertificate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        for e in &self.order {
            writeln!(f, "{}: {}", e.state, e.rule)?;
        }
        Ok(())
    }
}

impl CertEntry {
    pub fn new(state: StateId, rule: Rule) -> Self {
        Self { state, rule }
    }
}
