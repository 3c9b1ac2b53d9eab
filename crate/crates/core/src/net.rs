use alloc::vec::Vec;
use core::fmt;

use crate::{Configuration, IoNet, Rbn, StateId, Step, StepError};

/// A model with a one-step successor relation over configurations.
///
/// `step_successors` must be deterministic and every pair it returns must be
/// reproducible with `apply_step`.
pub trait TransitionSystem {
    fn states(&self) -> &[StateId];

    fn step_successors(&self, c: &Configuration) -> Vec<(Step, Configuration)>;

    fn apply_step(&self, c: &Configuration, step: &Step) -> Result<Configuration, StepError>;

    fn has_state(&self, q: &StateId) -> bool {
        self.states().contains(q)
    }
}

impl TransitionSystem for IoNet {
    fn states(&self) -> &[StateId] {
        IoNet::states(self)
    }

    fn step_successors(&self, c: &Configuration) -> Vec<(Step, Configuration)> {
        self.successors(c)
            .into_iter()
            .map(|(t, next)| (Step::Io(t), next))
            .collect()
    }

    fn apply_step(&self, c: &Configuration, step: &Step) -> Result<Configuration, StepError> {
        match step {
            Step::Io(t) => self.apply(c, t),
            Step::Broadcast(_) => Err(StepError::WrongModel),
        }
    }

    fn has_state(&self, q: &StateId) -> bool {
        IoNet::has_state(self, q)
    }
}

impl TransitionSystem for Rbn {
    fn states(&self) -> &[StateId] {
        Rbn::states(self)
    }

    fn step_successors(&self, c: &Configuration) -> Vec<(Step, Configuration)> {
        self.successors(c)
            .into_iter()
            .map(|(s, next)| (Step::Broadcast(s), next))
            .collect()
    }

    fn apply_step(&self, c: &Configuration, step: &Step) -> Result<Configuration, StepError> {
        match step {
            Step::Broadcast(s) => self.apply(c, s),
            Step::Io(_) => Err(StepError::WrongModel),
        }
    }

    fn has_state(&self, q: &StateId) -> bool {
        Rbn::has_state(self, q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    IoNet,
    Rbn,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::IoNet => "ionet",
            ModelKind::Rbn => "rbn",
        })
    }
}

/// Either model, for callers that load nets of unknown kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Net {
    Io(IoNet),
    Rbn(Rbn),
}

impl Net {
    pub fn kind(&self) -> ModelKind {
        match self {
            Net::Io(_) => ModelKind::IoNet,
            Net::Rbn(_) => ModelKind::Rbn,
        }
    }
}

impl TransitionSystem for Net {
    fn states(&self) -> &[StateId] {
        match self {
            Net::Io(n) => n.states(),
            Net::Rbn(n) => n.states(),
        }
    }

    fn step_successors(&self, c: &Configuration) -> Vec<(Step, Configuration)> {
        match self {
            Net::Io(n) => n.step_successors(c),
            Net::Rbn(n) => n.step_successors(c),
        }
    }

    fn apply_step(&self, c: &Configuration, step: &Step) -> Result<Configuration, StepError> {
        match self {
            Net::Io(n) => n.apply_step(c, step),
            Net::Rbn(n) => n.apply_step(c, step),
        }
    }

    fn has_state(&self, q: &StateId) -> bool {
        match self {
            Net::Io(n) => n.has_state(q),
            Net::Rbn(n) => n.has_state(q),
        }
    }
}
