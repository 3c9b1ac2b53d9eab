use std::collections::{BTreeMap, BTreeSet};

use iorbn::harness::{
    check_equivalence, check_io_crp_against_oracle, check_saturation_against_oracle,
    check_saturation_with, check_strong_simulation, check_translation_equivalence,
    equivalence_suite, gen_random_ionet, saturation_suite, Corpus, Direction, GenSpec,
    HarnessError, SaturationFailure,
};
use iorbn::mutation::{drop_receive, saturate_unguarded};
use iorbn_core::explicit::{post_star, DEFAULT_BUDGET};
use iorbn_core::symbolic::{CrpQuery, UnboundedInitialCube};
use iorbn_core::translate::{io_to_rbn, TranslateError, TranslationCertificate};
use iorbn_core::{
    Configuration, IoNet, IoTransition, MessageId, ModelKind, Rbn, RbnTransition, StateId,
};
use proptest::prelude::*;

fn s(name: &str) -> StateId {
    StateId::new(name).unwrap()
}

fn c(pairs: &[(&str, u32)]) -> Configuration {
    Configuration::from_counts(pairs.iter().map(|(q, n)| (s(q), *n)))
}

fn set(names: &[&str]) -> BTreeSet<StateId> {
    names.iter().map(|q| s(q)).collect()
}

fn observe() -> IoNet {
    IoNet::new(
        [s("a"), s("b")],
        [IoTransition::new(s("a"), s("b"), s("b"))],
    )
    .unwrap()
}

#[test]
fn equivalence_on_the_two_state_net() {
    assert_eq!(
        check_translation_equivalence(&observe(), &c(&[("a", 1), ("b", 1)]), DEFAULT_BUDGET),
        Ok(None)
    );
    // Both sides reach exactly {a:1,b:1} and {b:2}.
    let reach = post_star(&observe(), &c(&[("a", 1), ("b", 1)]), DEFAULT_BUDGET).unwrap();
    assert_eq!(
        reach.reachable_set(),
        [c(&[("a", 1), ("b", 1)]), c(&[("b", 2)])]
            .into_iter()
            .collect()
    );
}

#[test]
fn equivalence_without_transitions() {
    let net = IoNet::new([s("a"), s("b")], []).unwrap();
    for c0 in [c(&[]), c(&[("a", 2)]), c(&[("a", 1), ("b", 3)])] {
        assert_eq!(
            check_translation_equivalence(&net, &c0, DEFAULT_BUDGET),
            Ok(None)
        );
    }
}

#[test]
fn dropped_receive_is_exposed_with_a_witness() {
    let net = observe();
    let (rbn, cert) = io_to_rbn(&net);
    let mutant = drop_receive(&rbn).unwrap();
    let cx = check_equivalence(
        &net,
        &mutant,
        &cert,
        &c(&[("a", 1), ("b", 1)]),
        DEFAULT_BUDGET,
    )
    .unwrap()
    .unwrap();
    assert_eq!(cx.direction, Direction::SourceOnly);
    assert_eq!(cx.config, c(&[("b", 2)]));
    cx.witness.unwrap().replay(&net).unwrap();
}

#[test]
fn translation_strongly_simulates() {
    let net = observe();
    let (rbn, cert) = io_to_rbn(&net);
    let pairs = vec![
        (c(&[("a", 1), ("b", 1)]), c(&[("b", 2)])),
        (c(&[("a", 2)]), c(&[("b", 2)])),
        (c(&[("b", 2)]), c(&[("a", 1), ("b", 1)])),
    ];
    let report = check_strong_simulation(&net, &rbn, &cert, &pairs, DEFAULT_BUDGET).unwrap();
    assert!(report.passed());
    assert_eq!(report.instances_checked, 3);
}

#[test]
fn simulation_is_reflexive() {
    let net = observe();
    let cert = TranslationCertificate::identity(net.states(), ModelKind::IoNet, ModelKind::IoNet);
    let pairs = vec![
        (c(&[("a", 2), ("b", 1)]), c(&[("b", 3)])),
        (c(&[("a", 2)]), c(&[("b", 2)])),
    ];
    assert!(
        check_strong_simulation(&net, &net, &cert, &pairs, DEFAULT_BUDGET)
            .unwrap()
            .passed()
    );
}

#[test]
fn padding_must_avoid_the_image() {
    let map: BTreeMap<StateId, StateId> =
        [(s("a"), s("a")), (s("b"), s("b"))].into_iter().collect();
    let err = TranslationCertificate::new(
        map.clone(),
        c(&[("a", 1)]),
        ModelKind::IoNet,
        ModelKind::IoNet,
    );
    assert_eq!(err, Err(TranslateError::PaddingOverlap(s("a"))));

    // A padding state the simulating instance does not declare.
    let cert = TranslationCertificate::new(map, c(&[("z", 1)]), ModelKind::IoNet, ModelKind::IoNet)
        .unwrap();
    let err =
        check_strong_simulation(&observe(), &observe(), &cert, &[], DEFAULT_BUDGET).unwrap_err();
    assert_eq!(
        err,
        HarnessError::Certificate(TranslateError::UndeclaredTarget(s("z")))
    );
}

#[test]
fn padding_with_idle_and_active_helpers() {
    let map: BTreeMap<StateId, StateId> =
        [(s("a"), s("a")), (s("b"), s("b"))].into_iter().collect();
    let cert = TranslationCertificate::new(map, c(&[("z", 1)]), ModelKind::IoNet, ModelKind::IoNet)
        .unwrap();
    let pairs = vec![
        (c(&[("a", 2)]), c(&[("b", 2)])),
        (c(&[("a", 1), ("b", 1)]), c(&[("b", 2)])),
    ];

    // A helper that never moves changes nothing.
    let idle = IoNet::new(
        [s("a"), s("b"), s("z")],
        [IoTransition::new(s("a"), s("b"), s("b"))],
    )
    .unwrap();
    assert!(
        check_strong_simulation(&observe(), &idle, &cert, &pairs, DEFAULT_BUDGET)
            .unwrap()
            .passed()
    );

    // A helper that lets `a` move on its own breaks the simulation.
    let active = IoNet::new(
        [s("a"), s("b"), s("z")],
        [
            IoTransition::new(s("a"), s("b"), s("b")),
            IoTransition::new(s("a"), s("z"), s("b")),
        ],
    )
    .unwrap();
    let report =
        check_strong_simulation(&observe(), &active, &cert, &pairs, DEFAULT_BUDGET).unwrap();
    assert_eq!(report.mismatches.len(), 1);
    assert_eq!(report.mismatches[0].direction, Direction::TargetOnly);
}

#[test]
fn identity_certificates_compose_to_identity() {
    let net = observe();
    let (_, first) = io_to_rbn(&net);
    let second = TranslationCertificate::identity(net.states(), ModelKind::Rbn, ModelKind::Rbn);
    let composed = first.compose(&second).unwrap();
    assert!(composed.is_identity());
    assert_eq!(composed.padding(), &Configuration::new());
}

fn broadcast_receive_net() -> Rbn {
    let m = MessageId::new("m").unwrap();
    Rbn::new(
        [s("q"), s("p"), s("r")],
        [m.clone()],
        [
            RbnTransition::broadcast(s("q"), m.clone(), s("q")),
            RbnTransition::receive(s("p"), m, s("r")),
        ],
    )
    .unwrap()
}

#[test]
fn saturation_examples() {
    let net = broadcast_receive_net();
    assert_eq!(
        check_saturation_against_oracle(&net, &set(&["q", "p"]), 4, DEFAULT_BUDGET),
        Ok(None)
    );
    assert_eq!(
        check_saturation_against_oracle(&net, &set(&["p"]), 4, DEFAULT_BUDGET),
        Ok(None)
    );
    assert_eq!(
        check_saturation_against_oracle(&net, &BTreeSet::new(), 4, DEFAULT_BUDGET),
        Ok(None)
    );
}

#[test]
fn unguarded_receive_is_exposed() {
    // The broadcaster of m is never coverable from {p}.
    let m = MessageId::new("m").unwrap();
    let net = Rbn::new(
        [s("p"), s("r"), s("z")],
        [m.clone()],
        [
            RbnTransition::broadcast(s("z"), m.clone(), s("z")),
            RbnTransition::receive(s("p"), m, s("r")),
        ],
    )
    .unwrap();
    let failure =
        check_saturation_with(&net, &set(&["p"]), 4, DEFAULT_BUDGET, saturate_unguarded).unwrap();
    assert!(
        matches!(failure, Some(SaturationFailure::InvalidCertificate { .. })),
        "{failure:?}"
    );
}

#[test]
fn io_crp_examples_against_the_oracle() {
    let net = observe();
    let present = |names: &[&str]| CrpQuery::geq1(names.iter().map(|q| s(q)));
    for (support, target) in [
        (&["a", "b"][..], &["b"][..]),
        (&["a"], &["b"]),
        (&["b"], &["b"]),
        (&["a", "b"], &["a", "b"]),
    ] {
        let init = UnboundedInitialCube::new(support.iter().map(|q| s(q)));
        assert_eq!(
            check_io_crp_against_oracle(&net, &init, &present(target), 1..=6, DEFAULT_BUDGET),
            Ok(None)
        );
    }
}

#[test]
fn suites_are_reproducible() {
    let corpus = Corpus::new(42, 40);
    let strip = |mut r: iorbn::harness::SuiteReport| {
        r.elapsed = Default::default();
        r
    };
    assert_eq!(
        strip(equivalence_suite(&corpus).unwrap()),
        strip(equivalence_suite(&corpus).unwrap())
    );
    assert_eq!(
        strip(saturation_suite(&corpus).unwrap()),
        strip(saturation_suite(&corpus).unwrap())
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_nets_respect_their_spec(seed in any::<u64>(), lo in 1usize..5, extra in 0usize..3, k in 0usize..10) {
        let spec = GenSpec { seed, num_states: lo..=lo + extra, num_transitions: 0..=k, kind: ModelKind::IoNet };
        let net = gen_random_ionet(&spec).unwrap();
        prop_assert!((lo..=lo + extra).contains(&net.states().len()));
        prop_assert!(net.transitions().len() <= k);
        prop_assert_eq!(gen_random_ionet(&spec).unwrap(), net);
    }

    #[test]
    fn random_translations_are_equivalent(seed in any::<u64>()) {
        let spec = GenSpec { seed, num_states: 1..=3, num_transitions: 0..=5, kind: ModelKind::IoNet };
        let net = gen_random_ionet(&spec).unwrap();
        for c0 in iorbn::harness::configs_up_to(net.states(), 3) {
            prop_assert_eq!(check_translation_equivalence(&net, &c0, DEFAULT_BUDGET), Ok(None));
        }
    }
}
