use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ionet::{index_states, lookup};
use crate::{Configuration, MessageId, ModelError, StateId, StepError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Broadcast(MessageId),
    Receive(MessageId),
}

impl Action {
    pub fn message(&self) -> &MessageId {
        match self {
            Action::Broadcast(m) | Action::Receive(m) => m,
        }
    }

    pub fn is_broadcast(&self) -> bool {
        matches!(self, Action::Broadcast(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RbnTransition {
    pub source: StateId,
    pub action: Action,
    pub target: StateId,
}

impl RbnTransition {
    pub fn broadcast(source: StateId, message: MessageId, target: StateId) -> Self {
        Self {
            source,
            action: Action::Broadcast(message),
            target,
        }
    }

    pub fn receive(source: StateId, message: MessageId, target: StateId) -> Self {
        Self {
            source,
            action: Action::Receive(message),
            target,
        }
    }

    pub fn message(&self) -> &MessageId {
        self.action.message()
    }
}

impl fmt::Display for RbnTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sigil = if self.action.is_broadcast() { '!' } else { '?' };
        write!(
            f,
            "{} {sigil}{} -> {}",
            self.source,
            self.message(),
            self.target
        )
    }
}

/// One broadcast together with the receptions it triggers. Every receiver is
/// a distinct process, distinct from the sender; `receives` may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RbnStep {
    pub broadcast: RbnTransition,
    pub receives: Vec<RbnTransition>,
}

impl RbnStep {
    pub fn new(broadcast: RbnTransition, receives: Vec<RbnTransition>) -> Self {
        Self {
            broadcast,
            receives,
        }
    }

    /// Source states of sender and receivers as a multiset.
    pub fn preset(&self) -> Configuration {
        core::iter::once(&self.broadcast)
            .chain(&self.receives)
            .map(|t| t.source.clone())
            .collect()
    }
}

impl fmt::Display for RbnStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} recv [", self.broadcast)?;
        for (i, r) in self.receives.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}?{}->{}", r.source, r.message(), r.target)?;
        }
        f.write_str("]")
    }
}

/// A reconfigurable broadcast network `(Q', Σ', δ')`.
///
/// Transitions are kept sorted by `(source, broadcast-before-receive,
/// message, target)` using declaration indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rbn {
    states: Vec<StateId>,
    index: BTreeMap<StateId, usize>,
    alphabet: Vec<MessageId>,
    transitions: Vec<RbnTransition>,
}

impl Rbn {
    pub fn new<S, M, T>(states: S, alphabet: M, transitions: T) -> Result<Self, ModelError>
    where
        S: IntoIterator<Item = StateId>,
        M: IntoIterator<Item = MessageId>,
        T: IntoIterator<Item = RbnTransition>,
    {
        let (states, index) = index_states(states)?;
        let mut alphabet_order = Vec::new();
        let mut messages = BTreeMap::new();
        for m in alphabet {
            if messages.insert(m.clone(), alphabet_order.len()).is_some() {
                return Err(ModelError::DuplicateMessage(m));
            }
            alphabet_order.push(m);
        }
        let mut keyed = Vec::new();
        for t in transitions {
            let msg = messages
                .get(t.message())
                .copied()
                .ok_or_else(|| ModelError::UndeclaredMessage(t.message().clone()))?;
            let key = (
                lookup(&index, &t.source)?,
                usize::from(!t.action.is_broadcast()),
                msg,
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
            alphabet: alphabet_order,
            transitions: keyed.into_iter().map(|(_, t)| t).collect(),
        })
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn alphabet(&self) -> &[MessageId] {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[RbnTransition] {
        &self.transitions
    }

    pub fn has_state(&self, q: &StateId) -> bool {
        self.index.contains_key(q)
    }

    pub fn has_transition(&self, t: &RbnTransition) -> bool {
        self.transitions.contains(t)
    }

    pub fn broadcasts(&self) -> impl Iterator<Item = &RbnTransition> {
        self.transitions.iter().filter(|t| t.action.is_broadcast())
    }

    pub fn receives(&self) -> impl Iterator<Item = &RbnTransition> {
        self.transitions.iter().filter(|t| !t.action.is_broadcast())
    }

    /// Applies one broadcast step.
    ///
    /// The sender and every receiver must be pairwise distinct processes, so
    /// the configuration has to contain the multiset of all their sources.
    pub fn apply(&self, c: &Configuration, step: &RbnStep) -> Result<Configuration, StepError> {
        let Action::Broadcast(msg) = &step.broadcast.action else {
            return Err(StepError::Malformed(
                "first transition of a step must be a broadcast".to_string(),
            ));
        };
        for r in &step.receives {
            match &r.action {
                Action::Receive(m) if m == msg => {}
                Action::Receive(m) => {
                    return Err(StepError::MessageMismatch {
                        broadcast: msg.clone(),
                        received: m.clone(),
                    })
                }
                Action::Broadcast(_) => {
                    return Err(StepError::Malformed(
                        "receivers must use receive transitions".to_string(),
                    ))
                }
            }
        }
        if let Some(t) = core::iter::once(&step.broadcast)
            .chain(&step.receives)
            .find(|t| !self.has_transition(t))
        {
            return Err(StepError::UnknownTransition(t.to_string()));
        }
        if !c.contains(&step.preset()) {
            return Err(StepError::Disabled(step.to_string()));
        }
        Ok(fire(c, step))
    }

    /// One representative step per distinct successor configuration.
    ///
    /// Broadcasts are tried in canonical order. For each, the receivers are
    /// chosen per source state as a multiset of its matching receive
    /// transitions (processes are anonymous), starting from "nobody receives".
    pub fn successors(&self, c: &Configuration) -> Vec<(RbnStep, Configuration)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for b in self.broadcasts() {
            let mut rest = c.clone();
            if !rest.remove(&b.source, 1) {
                continue;
            }
            // Per source state with idle processes: its receive options.
            let groups: Vec<(u32, Vec<&RbnTransition>)> = self
                .states
                .iter()
                .filter_map(|p| {
                    let n = rest.get(p);
                    let options: Vec<_> = self
                        .receives()
                        .filter(|r| &r.source == p && r.message() == b.message())
                        .collect();
                    (n > 0 && !options.is_empty()).then_some((n, options))
                })
                .collect();

            let mut choices: Vec<Vec<Vec<u32>>> = Vec::with_capacity(groups.len());
            for (n, options) in &groups {
                choices.push(compositions(*n, options.len() + 1));
            }
            let mut cursor = vec![0usize; groups.len()];
            loop {
                let mut receives = Vec::new();
                for (g, (_, options)) in groups.iter().enumerate() {
                    let split = &choices[g][cursor[g]];
                    for (r, &k) in options.iter().zip(&split[1..]) {
                        receives.extend(core::iter::repeat_n((*r).clone(), k as usize));
                    }
                }
                let step = RbnStep::new(b.clone(), receives);
                let next = fire(c, &step);
                if seen.insert(next.clone()) {
                    out.push((step, next));
                }
                if !advance(&mut cursor, &choices) {
                    break;
                }
            }
        }
        out
    }
}

fn fire(c: &Configuration, step: &RbnStep) -> Configuration {
    let mut next = c.clone();
    for t in core::iter::once(&step.broadcast).chain(&step.receives) {
        next.remove(&t.source, 1);
    }
    for t in core::iter::once(&step.broadcast).chain(&step.receives) {
        next.add(&t.target, 1);
    }
    next
}

/// Odometer increment over the per-group choice lists.
fn advance(cursor: &mut [usize], choices: &[Vec<Vec<u32>>]) -> bool {
    for i in (0..cursor.len()).rev() {
        cursor[i] += 1;
        if cursor[i] < choices[i].len() {
            return true;
        }
        cursor[i] = 0;
    }
    false
}

/// All vectors of `parts` nonnegative integers summing to `n`, ordered so the
/// first component decreases (the first vector is `[n, 0, .., 0]`).
fn compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(n: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in (0..=n).rev() {
            prefix.push(first);
            go(n - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, parts, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(name: &str) -> StateId {
        StateId::new(name).unwrap()
    }

    fn m(name: &str) -> MessageId {
        MessageId::new(name).unwrap()
    }

    fn bc(p: &str, msg: &str, q: &str) -> RbnTransition {
        RbnTransition::broadcast(s(p), m(msg), s(q))
    }

    fn rc(p: &str, msg: &str, q: &str) -> RbnTransition {
        RbnTransition::receive(s(p), m(msg), s(q))
    }

    fn cfg(pairs: &[(&str, u32)]) -> Configuration {
        Configuration::from_counts(pairs.iter().map(|(q, n)| (s(q), *n)))
    }

    fn net(states: &[&str], ts: &[RbnTransition]) -> Rbn {
        Rbn::new(
            states.iter().map(|q| s(q)),
            [m("m"), m("n")],
            ts.iter().cloned(),
        )
        .unwrap()
    }

    #[test]
    fn compositions_enumerate_every_split() {
        assert_eq!(compositions(2, 2), [vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(compositions(0, 3), [vec![0, 0, 0]]);
        // C(n + k - 1, k - 1)
        assert_eq!(compositions(4, 3).len(), 15);
    }

    #[test]
    fn one_sender_one_receiver() {
        let n = net(&["q", "p", "p'"], &[bc("q", "m", "q"), rc("p", "m", "p'")]);
        let step = RbnStep::new(bc("q", "m", "q"), vec![rc("p", "m", "p'")]);
        assert_eq!(
            n.apply(&cfg(&[("q", 1), ("p", 1)]), &step).unwrap(),
            cfg(&[("q", 1), ("p'", 1)])
        );
    }

    #[test]
    fn broadcast_without_receivers_is_legal() {
        let n = net(&["q"], &[bc("q", "m", "q")]);
        let step = RbnStep::new(bc("q", "m", "q"), vec![]);
        assert_eq!(n.apply(&cfg(&[("q", 1)]), &step).unwrap(), cfg(&[("q", 1)]));
    }

    #[test]
    fn receivers_are_distinct_processes() {
        let n = net(&["q", "p", "p'"], &[bc("q", "m", "q"), rc("p", "m", "p'")]);
        let step = RbnStep::new(
            bc("q", "m", "q"),
            vec![rc("p", "m", "p'"), rc("p", "m", "p'")],
        );
        assert_eq!(
            n.apply(&cfg(&[("q", 1), ("p", 2)]), &step).unwrap(),
            cfg(&[("q", 1), ("p'", 2)])
        );
        assert!(matches!(
            n.apply(&cfg(&[("q", 1), ("p", 1)]), &step),
            Err(StepError::Disabled(_))
        ));
    }

    #[test]
    fn sender_cannot_receive_its_own_broadcast() {
        let n = net(&["q", "r"], &[bc("q", "m", "q"), rc("q", "m", "r")]);
        let step = RbnStep::new(bc("q", "m", "q"), vec![rc("q", "m", "r")]);
        assert!(n.apply(&cfg(&[("q", 1)]), &step).is_err());
        assert!(n.apply(&cfg(&[("q", 2)]), &step).is_ok());
    }

    #[test]
    fn mismatched_and_unknown_transitions() {
        let n = net(
            &["q", "p", "r"],
            &[bc("q", "m", "q"), rc("p", "m", "r"), rc("p", "n", "r")],
        );
        let step = RbnStep::new(bc("q", "m", "q"), vec![rc("p", "n", "r")]);
        assert!(matches!(
            n.apply(&cfg(&[("q", 1), ("p", 1)]), &step),
            Err(StepError::MessageMismatch { .. })
        ));
        let step = RbnStep::new(bc("p", "m", "p"), vec![]);
        assert!(matches!(
            n.apply(&cfg(&[("p", 1)]), &step),
            Err(StepError::UnknownTransition(_))
        ));
    }

    #[test]
    fn successors_enumerate_receiver_counts() {
        let n = net(&["q"], &[bc("q", "m", "q")]);
        assert_eq!(
            n.successors(&cfg(&[("q", 1)])),
            [(RbnStep::new(bc("q", "m", "q"), vec![]), cfg(&[("q", 1)]))]
        );

        let n = net(&["q", "p", "r"], &[bc("q", "m", "q"), rc("p", "m", "r")]);
        let succ: Vec<_> = n
            .successors(&cfg(&[("q", 1), ("p", 1)]))
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        assert_eq!(
            succ,
            [cfg(&[("q", 1), ("p", 1)]), cfg(&[("q", 1), ("r", 1)])]
        );

        let succ: Vec<_> = n
            .successors(&cfg(&[("q", 1), ("p", 2)]))
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        assert_eq!(
            succ,
            [
                cfg(&[("q", 1), ("p", 2)]),
                cfg(&[("q", 1), ("p", 1), ("r", 1)]),
                cfg(&[("q", 1), ("r", 2)]),
            ]
        );
    }
}
