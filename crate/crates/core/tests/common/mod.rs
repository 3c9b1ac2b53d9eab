#![allow(dead_code)]

use std::collections::BTreeSet;

use iorbn_core::{Configuration, IoNet, IoTransition, MessageId, Rbn, RbnTransition, StateId};
use proptest::prelude::*;

pub fn s(name: &str) -> StateId {
    StateId::new(name).unwrap()
}

pub fn state(i: usize) -> StateId {
    StateId::new(&format!("q{i}")).unwrap()
}

pub fn message(i: usize) -> MessageId {
    MessageId::new(&format!("m{i}")).unwrap()
}

pub fn arb_ionet(max_states: usize, max_transitions: usize) -> impl Strategy<Value = IoNet> {
    (1..=max_states).prop_flat_map(move |n| {
        prop::collection::btree_set((0..n, 0..n, 0..n), 0..=max_transitions).prop_map(move |ts| {
            IoNet::new(
                (0..n).map(state),
                ts.into_iter()
                    .map(|(p, q, r)| IoTransition::new(state(p), state(q), state(r))),
            )
            .unwrap()
        })
    })
}

pub fn arb_rbn(max_states: usize, max_transitions: usize) -> impl Strategy<Value = Rbn> {
    (1..=max_states, 1..=3usize).prop_flat_map(move |(n, k)| {
        prop::collection::btree_set((0..n, any::<bool>(), 0..k, 0..n), 0..=max_transitions)
            .prop_map(move |ts| {
                Rbn::new(
                    (0..n).map(state),
                    (0..k).map(message),
                    ts.into_iter().map(|(p, bcast, m, q)| {
                        if bcast {
                            RbnTransition::broadcast(state(p), message(m), state(q))
                        } else {
                            RbnTransition::receive(state(p), message(m), state(q))
                        }
                    }),
                )
                .unwrap()
            })
    })
}

/// A configuration over the first `states` states with at most `max_pop`
/// processes.
pub fn arb_config(states: usize, max_pop: usize) -> impl Strategy<Value = Configuration> {
    prop::collection::vec(0..states.max(1), 0..=max_pop)
        .prop_map(|procs| procs.into_iter().map(state).collect())
}

/// Expands a configuration into one state per labeled process.
pub fn processes(c: &Configuration) -> Vec<StateId> {
    c.iter()
        .flat_map(|(q, n)| std::iter::repeat_n(q.clone(), n as usize))
        .collect()
}

/// One-step IO successors computed over labeled processes: process `i`
/// observes a different process `j`.
pub fn io_successors_oracle(net: &IoNet, c: &Configuration) -> BTreeSet<Configuration> {
    let procs = processes(c);
    let mut out = BTreeSet::new();
    for i in 0..procs.len() {
        for j in 0..procs.len() {
            if i == j {
                continue;
            }
            for t in net.transitions() {
                if t.source == procs[i] && t.observed == procs[j] {
                    let mut next = procs.clone();
                    next[i] = t.target.clone();
                    out.insert(next.into_iter().collect());
                }
            }
        }
    }
    out
}

/// One-step RBN successors computed over labeled processes: one sender, and
/// every other process independently either ignores the message or takes one
/// of its matching receive transitions.
pub fn rbn_successors_oracle(net: &Rbn, c: &Configuration) -> BTreeSet<Configuration> {
    let procs = processes(c);
    let mut out = BTreeSet::new();
    for sender in 0..procs.len() {
        for b in net.broadcasts().filter(|b| b.source == procs[sender]) {
            let mut partial: Vec<Vec<StateId>> = vec![Vec::new()];
            for (j, p) in procs.iter().enumerate() {
                let mut options = vec![if j == sender {
                    b.target.clone()
                } else {
                    p.clone()
                }];
                if j != sender {
                    options.extend(
                        net.receives()
                            .filter(|r| &r.source == p && r.message() == b.message())
                            .map(|r| r.target.clone()),
                    );
                }
                partial = partial
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |o| {
                            let mut v = prefix.clone();
                            v.push(o.clone());
                            v
                        })
                    })
                    .collect();
            }
            out.extend(
                partial
                    .into_iter()
                    .map(|v| v.into_iter().collect::<Configuration>()),
            );
        }
    }
    out
}

pub fn arb_ionet_with_config(
    max_states: usize,
    max_transitions: usize,
    max_pop: usize,
) -> impl Strategy<Value = (IoNet, Configuration)> {
    arb_ionet(max_states, max_transitions).prop_flat_map(move |net| {
        let n = net.states().len();
        (Just(net), arb_config(n, max_pop))
    })
}

pub fn arb_rbn_with_config(
    max_states: usize,
    max_transitions: usize,
    max_pop: usize,
) -> impl Strategy<Value = (Rbn, Configuration)> {
    arb_rbn(max_states, max_transitions).prop_flat_map(move |net| {
        let n = net.states().len();
        (Just(net), arb_config(n, max_pop))
    })
}
