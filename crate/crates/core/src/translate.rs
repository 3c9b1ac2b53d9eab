//! The IO net to RBN construction and the certificate that relates the two.
//!
//! Every state `q` of the IO net becomes both a state and a message of the
//! RBN. Each process may at any time broadcast its own state (`q !q -> q`), and
//! an observation `p @ q -> p'` becomes the reception `p ?q -> p'`. A broadcast
//! with `k` receivers then corresponds to `k` consecutive observations of the
//! same sender, so reachability is preserved configuration by configuration
//! without auxiliary processes.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use crate::{
    Bound, Configuration, Cube, Interval, IoNet, IoTransition, MessageId, ModelKind, Rbn,
    RbnTransition, StateId, Step, StepError, Trace,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TranslateError {
    #[error("state {0} is outside the certificate's state map")]
    UnknownState(StateId),

    #[error("state map is not injective: two states map to {0}")]
    NotInjective(StateId),

    #[error("padding state {0} overlaps the image of the state map")]
    PaddingOverlap(StateId),

    #[error("state {0} of the target instance is not declared")]
    UndeclaredTarget(StateId),

    #[error("certificates cannot be composed: {0}")]
    NotComposable(String),

    #[error("configuration {0} does not contain the padding")]
    MissingPadding(Configuration),

    #[error("step does not come from the translation: {0}")]
    ForeignStep(String),

    #[error(transparent)]
    Step(#[from] StepError),
}

/// Relates an instance `I` to a simulating instance `J`: an injective renaming
/// of the states of `I` into those of `J`, plus a fixed multiset `h` of
/// auxiliary processes over the remaining states of `J`.
///
/// `C'` is reachable from `C` in `I` iff `map(C')·h` is reachable from
/// `map(C)·h` in `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationCertificate {
    state_map: BTreeMap<StateId, StateId>,
    padding: Configuration,
    pub source_kind: ModelKind,
    pub target_kind: ModelKind,
}

impl TranslationCertificate {
    pub fn new(
        state_map: BTreeMap<StateId, StateId>,
        padding: Configuration,
        source_kind: ModelKind,
        target_kind: ModelKind,
    ) -> Result<Self, TranslateError> {
        let mut image = BTreeMap::new();
        for to in state_map.values() {
            if image.insert(to.clone(), ()).is_some() {
                return Err(TranslateError::NotInjective(to.clone()));
            }
        }
        if let Some(q) = padding.support().find(|q| image.contains_key(*q)) {
            return Err(TranslateError::PaddingOverlap(q.clone()));
        }
        Ok(Self {
            state_map,
            padding,
            source_kind,
            target_kind,
        })
    }

    pub fn identity<'a, I>(states: I, source_kind: ModelKind, target_kind: ModelKind) -> Self
    where
        I: IntoIterator<Item = &'a StateId>,
    {
        Self {
            state_map: states.into_iter().map(|q| (q.clone(), q.clone())).collect(),
            padding: Configuration::new(),
            source_kind,
            target_kind,
        }
    }

    pub fn state_map(&self) -> &BTreeMap<StateId, StateId> {
        &self.state_map
    }

    pub fn padding(&self) -> &Configuration {
        &self.padding
    }

    pub fn is_identity(&self) -> bool {
        self.padding.is_empty() && self.state_map.iter().all(|(a, b)| a == b)
    }

    pub fn map_state(&self, q: &StateId) -> Result<&StateId, TranslateError> {
        self.state_map
            .get(q)
            .ok_or_else(|| TranslateError::UnknownState(q.clone()))
    }

    /// Checks the certificate against concrete instances: the map is total on
    /// `source_states`, lands in `target_states`, and the padding lives on
    /// target states outside the image.
    pub fn check_against(
        &self,
        source_states: &[StateId],
        target_states: &[StateId],
    ) -> Result<(), TranslateError> {
        for q in source_states {
            let to = self.map_state(q)?;
            if !target_states.contains(to) {
                return Err(TranslateError::UndeclaredTarget(to.clone()));
            }
        }
        for q in self.padding.support() {
            if !target_states.contains(q) {
                return Err(TranslateError::UndeclaredTarget(q.clone()));
            }
        }
        Ok(())
    }

    /// `map(c) + h`.
    pub fn transport_config(&self, c: &Configuration) -> Result<Configuration, TranslateError> {
        let mut out = self.padding.clone();
        for (q, n) in c.iter() {
            out.add(self.map_state(q)?, n);
        }
        Ok(out)
    }

    /// Inverse of [`Self::transport_config`].
    pub fn untransport_config(&self, c: &Configuration) -> Result<Configuration, TranslateError> {
        let mut rest = c.clone();
        for (q, n) in self.padding.iter() {
            if !rest.remove(q, n) {
                return Err(TranslateError::MissingPadding(c.clone()));
            }
        }
        let inverse: BTreeMap<&StateId, &StateId> =
            self.state_map.iter().map(|(a, b)| (b, a)).collect();
        let mut out = Configuration::new();
        for (q, n) in rest.iter() {
            let from = inverse
                .get(q)
                .ok_or_else(|| TranslateError::UnknownState(q.clone()))?;
            out.add(from, n);
        }
        Ok(out)
    }

    /// Renames the cube's states and pins every padding state to exactly
    /// `h(q)`. Consistency is not checked here.
    pub fn transport_cube(&self, cube: &Cube) -> Result<Cube, TranslateError> {
        let mut out = Cube::new(cube.role());
        for (q, interval) in cube.bounds() {
            out.set(self.map_state(q)?.clone(), interval);
        }
        for (q, n) in self.padding.iter() {
            out.set(q.clone(), Interval::new(n, Bound::Finite(n)));
        }
        Ok(out)
    }

    /// `self` followed by `next`: `next.map ∘ self.map` with padding
    /// `next(h_self) + h_next`.
    pub fn compose(&self, next: &TranslationCertificate) -> Result<Self, TranslateError> {
        if self.target_kind != next.source_kind {
            return Err(TranslateError::NotComposable(
                "model kinds do not line up".to_string(),
            ));
        }
        let mut state_map = BTreeMap::new();
        for (a, b) in &self.state_map {
            state_map.insert(a.clone(), next.map_state(b)?.clone());
        }
        let padding = next.transport_config(&self.padding)?;
        Self::new(state_map, padding, self.source_kind, next.target_kind)
    }
}

/// Builds the RBN in which processes broadcast their own state.
///
/// `Q' = Σ' = Q`; `δ'` holds `q !q -> q` for every state and `p ?q -> p'` for
/// every observation `p @ q -> p'`. The certificate is the identity with no
/// padding.
pub fn io_to_rbn(net: &IoNet) -> (Rbn, TranslationCertificate) {
    let announce = net
        .states()
        .iter()
        .map(|q| RbnTransition::broadcast(q.clone(), MessageId::from(q), q.clone()));
    let observe = net.transitions().iter().map(|t| {
        RbnTransition::receive(
            t.source.clone(),
            MessageId::from(&t.observed),
            t.target.clone(),
        )
    });
    let rbn = Rbn::new(
        net.states().iter().cloned(),
        net.states().iter().map(MessageId::from),
        announce.chain(observe),
    )
    .expect("translation of a valid IO net is a valid RBN");
    let cert = TranslationCertificate::identity(net.states(), ModelKind::IoNet, ModelKind::Rbn);
    (rbn, cert)
}

/// True iff every broadcast of `rbn` has the form `q !q -> q`.
pub fn has_announce_shape(rbn: &Rbn) -> bool {
    rbn.broadcasts()
        .all(|t| t.source == t.target && t.message().as_str() == t.source.as_str())
}

/// Maps a trace of `io_to_rbn(net)` back to `net`: a broadcast of `q` received
/// by `p1 ?q -> p1'`, ..., `pk ?q -> pk'` becomes the observations
/// `p1 @ q -> p1'`, ..., `pk @ q -> pk'`. Broadcasts nobody receives vanish.
pub fn rbn_trace_to_io(
    net: &IoNet,
    cert: &TranslationCertificate,
    trace: &Trace,
) -> Result<Trace, TranslateError> {
    let inverse: BTreeMap<&StateId, &StateId> =
        cert.state_map.iter().map(|(a, b)| (b, a)).collect();
    let back = |q: &StateId| -> Result<StateId, TranslateError> {
        inverse
            .get(q)
            .map(|q| (*q).clone())
            .ok_or_else(|| TranslateError::UnknownState(q.clone()))
    };

    let mut out = Trace::empty(cert.untransport_config(&trace.initial)?);
    for (step, _) in &trace.steps {
        let Step::Broadcast(s) = step else {
            return Err(TranslateError::ForeignStep(step.to_string()));
        };
        let b = &s.broadcast;
        if b.source != b.target || b.message().as_str() != b.source.as_str() {
            return Err(TranslateError::ForeignStep(step.to_string()));
        }
        let observed = back(&b.source)?;
        for r in &s.receives {
            let t = IoTransition::new(back(&r.source)?, observed.clone(), back(&r.target)?);
            out.push(net, Step::Io(t))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn s(name: &str) -> StateId {
        StateId::new(name).unwrap()
    }

    fn m(name: &str) -> MessageId {
        MessageId::new(name).unwrap()
    }

    fn cfg(pairs: &[(&str, u32)]) -> Configuration {
        Configuration::from_counts(pairs.iter().map(|(q, n)| (s(q), *n)))
    }

    fn ab_net() -> IoNet {
        IoNet::new(
            [s("a"), s("b")],
            [IoTransition::new(s("a"), s("b"), s("b"))],
        )
        .unwrap()
    }

    #[test]
    fn two_state_net_translation() {
        let (rbn, cert) = io_to_rbn(&ab_net());
        assert_eq!(rbn.states(), [s("a"), s("b")]);
        assert_eq!(rbn.alphabet(), [m("a"), m("b")]);
        let mut got: Vec<_> = rbn.transitions().to_vec();
        got.sort();
        let mut want = vec![
            RbnTransition::broadcast(s("a"), m("a"), s("a")),
            RbnTransition::broadcast(s("b"), m("b"), s("b")),
            RbnTransition::receive(s("a"), m("b"), s("b")),
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(cert.is_identity());
        assert!(has_announce_shape(&rbn));
    }

    #[test]
    fn net_without_observations_only_announces() {
        let net = IoNet::new([s("a")], []).unwrap();
        let (rbn, _) = io_to_rbn(&net);
        assert_eq!(
            rbn.transitions(),
            [RbnTransition::broadcast(s("a"), m("a"), s("a"))]
        );
    }

    #[test]
    fn identity_transport_and_padding() {
        let cert =
            TranslationCertificate::identity(&[s("a"), s("b")], ModelKind::IoNet, ModelKind::Rbn);
        let c = cfg(&[("a", 2), ("b", 1)]);
        assert_eq!(cert.transport_config(&c).unwrap(), c);
        assert_eq!(
            cert.transport_config(&cfg(&[("x", 1)])),
            Err(TranslateError::UnknownState(s("x")))
        );

        let padded = TranslationCertificate::new(
            [(s("a"), s("a"))].into_iter().collect(),
            cfg(&[("z", 1)]),
            ModelKind::IoNet,
            ModelKind::Rbn,
        )
        .unwrap();
        let moved = padded.transport_config(&cfg(&[("a", 1)])).unwrap();
        assert_eq!(moved, cfg(&[("a", 1), ("z", 1)]));
        assert_eq!(padded.untransport_config(&moved).unwrap(), cfg(&[("a", 1)]));
    }

    #[test]
    fn padding_overlapping_the_image_is_rejected() {
        let err = TranslationCertificate::new(
            [(s("a"), s("a"))].into_iter().collect(),
            cfg(&[("a", 1)]),
            ModelKind::IoNet,
            ModelKind::Rbn,
        );
        assert_eq!(err, Err(TranslateError::PaddingOverlap(s("a"))));
    }

    #[test]
    fn cube_transport_pins_padding() {
        let cert = TranslationCertificate::identity(&[s("b")], ModelKind::IoNet, ModelKind::Rbn);
        let cube = Cube::target().with(s("b"), Interval::AT_LEAST_ONE);
        assert_eq!(cert.transport_cube(&cube).unwrap(), cube);

        let padded = TranslationCertificate::new(
            [(s("a"), s("a"))].into_iter().collect(),
            cfg(&[("z", 1)]),
            ModelKind::IoNet,
            ModelKind::Rbn,
        )
        .unwrap();
        let cube = Cube::target().with(s("a"), Interval::ANY);
        assert_eq!(
            padded.transport_cube(&cube).unwrap(),
            Cube::target()
                .with(s("a"), Interval::ANY)
                .with(s("z"), Interval::exactly(1))
        );

        // Inconsistent bounds pass through untouched.
        let bad = Cube::target().with(s("b"), Interval::new(3, Bound::Finite(1)));
        assert_eq!(cert.transport_cube(&bad).unwrap(), bad);
    }

    #[test]
    fn identities_compose_to_identity() {
        let states = [s("a"), s("b")];
        let first = TranslationCertificate::identity(&states, ModelKind::IoNet, ModelKind::Rbn);
        let second = TranslationCertificate::identity(&states, ModelKind::Rbn, ModelKind::Rbn);
        let both = first.compose(&second).unwrap();
        assert!(both.is_identity());
        assert_eq!(both.source_kind, ModelKind::IoNet);
        assert!(second.compose(&first).is_err());
    }

    #[test]
    fn rbn_trace_maps_to_observation_sequence() {
        let net = ab_net();
        let (rbn, cert) = io_to_rbn(&net);
        let mut trace = Trace::empty(cfg(&[("a", 2), ("b", 1)]));
        let step = crate::RbnStep::new(
            RbnTransition::broadcast(s("b"), m("b"), s("b")),
            vec![
                RbnTransition::receive(s("a"), m("b"), s("b")),
                RbnTransition::receive(s("a"), m("b"), s("b")),
            ],
        );
        trace.push(&rbn, Step::Broadcast(step)).unwrap();
        let io = rbn_trace_to_io(&net, &cert, &trace).unwrap();
        assert_eq!(io.len(), 2);
        io.replay(&net).unwrap();
        assert_eq!(io.final_config(), &cfg(&[("b", 3)]));
    }
}
