//! Deliberately broken variants of the translation, the saturation procedure
//! and the IO semantics. The harness must tell each of them apart from the
//! real thing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use iorbn_core::symbolic::{
    CertEntry, Rule, SaturationCertificate, SymbolicError, UnboundedInitialCube,
};
use iorbn_core::{
    Configuration, IoNet, IoTransition, MessageId, Rbn, RbnTransition, StateId, Step, StepError,
    TransitionSystem,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// The translation loses one receive transition.
    DropReceive,
    /// Saturation fires a receive without requiring a covered broadcaster.
    UnguardedReceive,
    /// An IO process may observe itself.
    SelfObservation,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [
        Mutation::DropReceive,
        Mutation::UnguardedReceive,
        Mutation::SelfObservation,
    ];
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mutation::DropReceive => "drop-receive",
            Mutation::UnguardedReceive => "unguarded-receive",
            Mutation::SelfObservation => "self-observation",
        })
    }
}

/// `rbn` without its first receive transition, or `None` if it has none.
pub fn drop_receive(rbn: &Rbn) -> Option<Rbn> {
    let victim = rbn.receives().next()?.clone();
    let kept: Vec<RbnTransition> = rbn
        .transitions()
        .iter()
        .filter(|t| **t != victim)
        .cloned()
        .collect();
    Some(
        Rbn::new(
            rbn.states().iter().cloned(),
            rbn.alphabet().iter().cloned(),
            kept,
        )
        .expect("subset of a valid net is valid"),
    )
}

/// Saturation where a receive on `m` fires as soon as the net has any
/// broadcast of `m`, covered or not.
pub fn saturate_unguarded(
    net: &Rbn,
    init: &UnboundedInitialCube,
) -> Result<(BTreeSet<StateId>, SaturationCertificate), SymbolicError> {
    if let Some(q) = init.support().iter().find(|q| !net.has_state(q)) {
        return Err(SymbolicError::UnknownState(q.clone()));
    }
    let mut any_broadcast: BTreeMap<&MessageId, &RbnTransition> = BTreeMap::new();
    for b in net.broadcasts() {
        any_broadcast.entry(b.message()).or_insert(b);
    }

    let mut covered = BTreeSet::new();
    let mut order = Vec::new();
    for q in net.states().iter().filter(|q| init.support().contains(*q)) {
        covered.insert(q.clone());
        order.push(CertEntry::new(q.clone(), Rule::Init));
    }
    loop {
        let mut changed = false;
        for t in net.transitions() {
            if covered.contains(&t.target) || !covered.contains(&t.source) {
                continue;
            }
            let rule = if t.action.is_broadcast() {
                Rule::BroadcastFrom(t.clone())
            } else if let Some(b) = any_broadcast.get(t.message()) {
                Rule::ReceiveUsing {
                    receive: t.clone(),
                    broadcast: (*b).clone(),
                }
            } else {
                continue;
            };
            covered.insert(t.target.clone());
            order.push(CertEntry::new(t.target.clone(), rule));
            changed = true;
        }
        if !changed {
            break;
        }
    }
    Ok((covered, SaturationCertificate::new(order)))
}

/// IO semantics where `p @ p -> r` is enabled by a single process in `p`.
#[derive(Debug, Clone)]
pub struct SelfObservingIoNet(pub IoNet);

impl SelfObservingIoNet {
    fn enabled(&self, c: &Configuration, t: &IoTransition) -> bool {
        c.get(&t.source) >= 1 && c.get(&t.observed) >= 1
    }
}

impl TransitionSystem for SelfObservingIoNet {
    fn states(&self) -> &[StateId] {
        self.0.states()
    }

    fn step_successors(&self, c: &Configuration) -> Vec<(Step, Configuration)> {
        let mut out: Vec<(Step, Configuration)> = Vec::new();
        for t in self.0.transitions().iter().filter(|t| self.enabled(c, t)) {
            let mut next = c.clone();
            next.move_one(&t.source, &t.target);
            if !out.iter().any(|(_, seen)| *seen == next) {
                out.push((Step::Io(t.clone()), next));
            }
        }
        out
    }

    fn apply_step(&self, c: &Configuration, step: &Step) -> Result<Configuration, StepError> {
        let Step::Io(t) = step else {
            return Err(StepError::WrongModel);
        };
        if !self.0.has_transition(t) {
            return Err(StepError::UnknownTransition(t.to_string()));
        }
        if !self.enabled(c, t) {
            return Err(StepError::Disabled(t.to_string()));
        }
        let mut next = c.clone();
        next.move_one(&t.source, &t.target);
        Ok(next)
    }
}
