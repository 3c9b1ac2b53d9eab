use alloc::vec::Vec;
use core::fmt;

use crate::{Configuration, IoTransition, RbnStep, StepError, TransitionSystem};

/// A single step of either model.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Step {
    Io(IoTransition),
    Broadcast(RbnStep),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Io(t) => write!(f, "io {t}"),
            Step::Broadcast(s) => write!(f, "bcast {s}"),
        }
    }
}

/// A run: an initial configuration and the configuration reached after each
/// step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub initial: Configuration,
    pub steps: Vec<(Step, Configuration)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("step {index}: {source}")]
    Step { index: usize, source: StepError },

    #[error("step {index}: recorded configuration {recorded} differs from computed {computed}")]
    Mismatch {
        index: usize,
        recorded: Configuration,
        computed: Configuration,
    },
}

impl Trace {
    pub fn empty(initial: Configuration) -> Self {
        Self {
            initial,
            steps: Vec::new(),
        }
    }

    /// Appends `step` after applying it to the current final configuration.
    pub fn push<S: TransitionSystem + ?Sized>(
        &mut self,
        sys: &S,
        step: Step,
    ) -> Result<(), StepError> {
        let next = sys.apply_step(self.final_config(), &step)?;
        self.steps.push((step, next));
        Ok(())
    }

    pub fn final_config(&self) -> &Configuration {
        self.steps.last().map_or(&self.initial, |(_, c)| c)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn configs(&self) -> impl Iterator<Item = &Configuration> {
        core::iter::once(&self.initial).chain(self.steps.iter().map(|(_, c)| c))
    }

    /// Re-applies every step and checks it reproduces the recorded
    /// configuration.
    pub fn replay<S: TransitionSystem + ?Sized>(&self, sys: &S) -> Result<(), ReplayError> {
        let mut current = &self.initial;
        for (index, (step, recorded)) in self.steps.iter().enumerate() {
            let computed = sys
                .apply_step(current, step)
                .map_err(|source| ReplayError::Step { index, source })?;
            if &computed != recorded {
                return Err(ReplayError::Mismatch {
                    index,
                    recorded: recorded.clone(),
                    computed,
                });
            }
            current = recorded;
        }
        Ok(())
    }
}
