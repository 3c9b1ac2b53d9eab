//! Step semantics against labeled-process oracles, plus the structural
//! invariants every successor enumeration must satisfy.

mod common;

use std::collections::BTreeSet;

use common::*;
use iorbn_core::{
    Configuration, IoNet, IoTransition, MessageId, Rbn, RbnStep, RbnTransition, TransitionSystem,
};
use proptest::prelude::*;

fn cfg(pairs: &[(&str, u32)]) -> Configuration {
    Configuration::from_counts(pairs.iter().map(|(q, n)| (s(q), *n)))
}

#[test]
fn two_rules_give_two_io_successors() {
    let net = IoNet::new(
        [s("p"), s("q"), s("r"), s("s")],
        [
            IoTransition::new(s("p"), s("q"), s("r")),
            IoTransition::new(s("q"), s("p"), s("s")),
        ],
    )
    .unwrap();
    let c = cfg(&[("p", 1), ("q", 1)]);
    let got: BTreeSet<_> = net.successors(&c).into_iter().map(|(_, c)| c).collect();
    assert_eq!(got, io_successors_oracle(&net, &c));
    assert_eq!(got.len(), 2);
}

#[test]
fn receiver_counts_match_labeled_oracle() {
    let m = MessageId::new("m").unwrap();
    let net = Rbn::new(
        [s("q"), s("p"), s("r")],
        [m.clone()],
        [
            RbnTransition::broadcast(s("q"), m.clone(), s("q")),
            RbnTransition::receive(s("p"), m, s("r")),
        ],
    )
    .unwrap();
    for c in [cfg(&[("q", 1), ("p", 1)]), cfg(&[("q", 1), ("p", 2)])] {
        let got: BTreeSet<_> = net.successors(&c).into_iter().map(|(_, c)| c).collect();
        let want = rbn_successors_oracle(&net, &c);
        assert_eq!(got, want);
    }
    assert_eq!(
        rbn_successors_oracle(&net, &cfg(&[("q", 1), ("p", 2)])).len(),
        3
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn io_successors_match_oracle((net, c) in arb_ionet_with_config(4, 8, 4)) {
        let succ = net.successors(&c);
        let got: BTreeSet<_> = succ.iter().map(|(_, c)| c.clone()).collect();
        prop_assert_eq!(got, io_successors_oracle(&net, &c));
        for (t, next) in &succ {
            prop_assert_eq!(&net.apply(&c, t).unwrap(), next);
            prop_assert_eq!(next.population(), c.population());
            prop_assert!(next.iter().all(|(_, n)| n > 0));
        }
        prop_assert_eq!(net.successors(&c), succ);
    }

    #[test]
    fn rbn_successors_match_oracle((net, c) in arb_rbn_with_config(4, 8, 4)) {
        let succ = net.successors(&c);
        let got: BTreeSet<_> = succ.iter().map(|(_, c)| c.clone()).collect();
        prop_assert_eq!(got.len(), succ.len(), "duplicate successor configurations");
        prop_assert_eq!(got, rbn_successors_oracle(&net, &c));
        for (step, next) in &succ {
            prop_assert_eq!(&net.apply(&c, step).unwrap(), next);
            prop_assert_eq!(next.population(), c.population());
            prop_assert!(next.iter().all(|(_, n)| n > 0));
        }
        prop_assert_eq!(net.successors(&c), succ);
    }

    #[test]
    fn receiver_order_is_irrelevant((net, c) in arb_rbn_with_config(4, 10, 5), seed in any::<u64>()) {
        for (step, next) in net.successors(&c) {
            let mut receives = step.receives.clone();
            // Deterministic shuffle driven by the seed.
            let len = receives.len();
            if len > 1 {
                for i in 0..len {
                    let j = ((seed >> (i % 32)) as usize + i * 7) % len;
                    receives.swap(i, j);
                }
            }
            let permuted = RbnStep::new(step.broadcast.clone(), receives);
            prop_assert_eq!(net.apply(&c, &permuted).unwrap(), next);
        }
    }

    #[test]
    fn trait_successors_replay((net, c) in arb_rbn_with_config(3, 6, 3)) {
        for (step, next) in net.step_successors(&c) {
            prop_assert_eq!(net.apply_step(&c, &step).unwrap(), next);
        }
    }
}
