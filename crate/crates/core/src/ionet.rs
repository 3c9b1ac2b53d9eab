use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use crate::{Configuration, ModelError, StateId, StepError};

/// `source @ observed -> target`: a process in `source` that sees another
/// process in `observed` moves to `target`. The observed process does not move.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IoTransition {
    pub source: StateId,
    pub observed: StateId,
    pub target: StateId,
}

impl IoTransition {
    pub fn new(source: StateId, observed: StateId, target: StateId) -> Self {
        Self {
            source,
            observed,
            target,
        }
    }

    /// The multiset `{source, observed}` that must be present for the
    /// transition to fire.
    pub fn preset(&self) -> Configuration {
        Configuration::from_iter([self.source.clone(), self.observed.clone()])
    }
}

impl fmt::Display for IoTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {} -> {}", self.source, self.observed, self.target)
    }
}

/// An immediate observation net `(Q, δ)`.
///
/// States keep their declaration order. Transitions are stored sorted by the
/// declaration indices of `(source, observed, target)`, which is the canonical
/// order used by every enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoNet {
    states: Vec<StateId>,
    index: BTreeMap<StateId, usize>,
    transitions: Vec<IoTransition>,
}

pub(crate) fn index_states<I>(
    states: I,
) -> Result<(Vec<StateId>, BTreeMap<StateId, usize>), ModelError>
where
    I: IntoIterator<Item = StateId>,
{
    let mut order = Vec::new();
    let mut index = BTreeMap::new();
    for q in states {
        if index.insert(q.clone(), order.len()).is_some() {
            return Err(ModelError::DuplicateState(q));
        }
        order.push(q);
    }
    Ok((order, index))
}

pub(crate) fn lookup(index: &BTreeMap<StateId, usize>, q: &StateId) -> Result<usize, ModelError> {
    index
        .get(q)
        .copied()
        .ok_or_else(|| ModelError::UndeclaredState(q.clone()))
}

impl IoNet {
    pub fn new<S, T>(states: S, transitions: T) -> Result<Self, ModelError>
    where
        S: IntoIterator<Item = StateId>,
        T: IntoIterator<Item = IoTransition>,
    {
        let (states, index) = index_states(states)?;
        let mut keyed = Vec::new();
        for t in transitions {
            let key = (
                lookup(&index, &t.source)?,
                lookup(&index, &t.observed)?,
                lookup(&index, &t.target)?,
            );
            keyed.push((key, t));
        }
        keyed.sort_by_key(|(k, _)| *k);
        if let Some(w) = keyed.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ModelError::DuplicateTransition(w[0].1.to_string()));
        }
        Ok(Self {
            states,
            index,
            transitions: keyed.into_iter().map(|(_, t)| t).collect(),
        })
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn transitions(&self) -> &[IoTransition] {
        &self.transitions
    }

    pub fn has_state(&self, q: &StateId) -> bool {
        self.index.contains_key(q)
    }

    pub fn state_index(&self, q: &StateId) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn has_transition(&self, t: &IoTransition) -> bool {
        self.transitions.contains(t)
    }

    pub fn is_enabled(&self, c: &Configuration, t: &IoTransition) -> bool {
        if t.source == t.observed {
            c.get(&t.source) >= 2
        } else {
            c.get(&t.source) >= 1 && c.get(&t.observed) >= 1
        }
    }

    /// Fires `t`: one process leaves `source` for `target`, while a distinct
    /// process stays in `observed`.
    pub fn apply(&self, c: &Configuration, t: &IoTransition) -> Result<Configuration, StepError> {
        if !self.has_transition(t) {
            return Err(StepError::UnknownTransition(t.to_string()));
        }
        if !self.is_enabled(c, t) {
            return Err(StepError::Disabled(t.to_string()));
        }
        let mut next = c.clone();
        next.move_one(&t.source, &t.target);
        Ok(next)
    }

    /// All enabled transitions with their successor, in canonical order.
    pub fn successors(&self, c: &Configuration) -> Vec<(IoTransition, Configuration)> {
        self.transitions
            .iter()
            .filter(|t| self.is_enabled(c, t))
            .map(|t| {
                let mut next = c.clone();
                next.move_one(&t.source, &t.target);
                (t.clone(), next)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(name: &str) -> StateId {
        StateId::new(name).unwrap()
    }

    fn t(p: &str, q: &str, r: &str) -> IoTransition {
        IoTransition::new(s(p), s(q), s(r))
    }

    fn cfg(pairs: &[(&str, u32)]) -> Configuration {
        Configuration::from_counts(pairs.iter().map(|(q, n)| (s(q), *n)))
    }

    fn net(states: &[&str], ts: &[IoTransition]) -> IoNet {
        IoNet::new(states.iter().map(|q| s(q)), ts.iter().cloned()).unwrap()
    }

    #[test]
    fn observer_moves_observed_stays() {
        let n = net(&["p", "q", "r"], &[t("p", "q", "r")]);
        let next = n
            .apply(&cfg(&[("p", 1), ("q", 1)]), &t("p", "q", "r"))
            .unwrap();
        assert_eq!(next, cfg(&[("q", 1), ("r", 1)]));
    }

    #[test]
    fn self_observation_needs_two_processes() {
        let n = net(&["p", "q", "r"], &[t("p", "p", "r")]);
        let rule = t("p", "p", "r");
        assert!(matches!(
            n.apply(&cfg(&[("p", 1)]), &rule),
            Err(StepError::Disabled(_))
        ));
        assert_eq!(
            n.apply(&cfg(&[("p", 2), ("q", 1)]), &rule).unwrap(),
            cfg(&[("p", 1), ("q", 1), ("r", 1)])
        );
    }

    #[test]
    fn unknown_transition_is_rejected() {
        let n = net(&["p", "q", "r"], &[t("p", "q", "r")]);
        assert!(matches!(
            n.apply(&cfg(&[("p", 1), ("q", 1)]), &t("q", "p", "r")),
            Err(StepError::UnknownTransition(_))
        ));
    }

    #[test]
    fn successors_follow_canonical_order() {
        let n = net(&["p", "q", "r"], &[t("p", "q", "r")]);
        assert!(n.successors(&cfg(&[("p", 1)])).is_empty());
        assert_eq!(
            n.successors(&cfg(&[("p", 1), ("q", 1)])),
            [(t("p", "q", "r"), cfg(&[("q", 1), ("r", 1)]))]
        );

        // Declared in reverse; the canonical order is by declaration index.
        let n = net(&["p", "q", "r", "s"], &[t("q", "p", "s"), t("p", "q", "r")]);
        let succ = n.successors(&cfg(&[("p", 1), ("q", 1)]));
        assert_eq!(
            succ,
            [
                (t("p", "q", "r"), cfg(&[("q", 1), ("r", 1)])),
                (t("q", "p", "s"), cfg(&[("p", 1), ("s", 1)])),
            ]
        );
    }

    #[test]
    fn construction_validates_references_and_duplicates() {
        assert_eq!(
            IoNet::new([s("a")], [t("a", "b", "a")]),
            Err(ModelError::UndeclaredState(s("b")))
        );
        assert!(matches!(
            IoNet::new([s("a")], [t("a", "a", "a"), t("a", "a", "a")]),
            Err(ModelError::DuplicateTransition(_))
        ));
        assert_eq!(
            IoNet::new([s("a"), s("a")], []),
            Err(ModelError::DuplicateState(s("a")))
        );
    }
}
