//! Breadth-first reachability at a fixed population.
//!
//! This is the ground truth the symbolic procedures and the translation are
//! checked against. Exploration is deterministic: successors are visited in
//! the model's canonical order and the first path found to a configuration is
//! kept, so witnesses are shortest runs.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::{Configuration, Cube, Interval, ModelError, StateId, Step, Trace, TransitionSystem};

/// Default cap on configurations stored by one exploration.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExploreError {
    #[error("node budget exhausted after {explored} configurations; result is partial")]
    BudgetExceeded {
        explored: usize,
        partial: Option<Box<ReachResult>>,
    },

    #[error("state {0} does not belong to the net")]
    UnknownState(StateId),

    #[error("empty population range")]
    EmptyRange,

    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    config: Configuration,
    parent: Option<(usize, Step)>,
}

/// `post*(c0)` with the BFS tree that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachResult {
    nodes: Vec<Node>,
    index: BTreeMap<Configuration, usize>,
    population: u32,
    complete: bool,
}

impl ReachResult {
    /// Reachable configurations in discovery order, starting with `c0`.
    pub fn reachable(&self) -> impl Iterator<Item = &Configuration> {
        self.nodes.iter().map(|n| &n.config)
    }

    pub fn reachable_set(&self) -> BTreeSet<Configuration> {
        self.index.keys().cloned().collect()
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        self.index.contains_key(c)
    }

    pub fn explored(&self) -> usize {
        self.nodes.len()
    }

    pub fn population(&self) -> u32 {
        self.population
    }

    /// False when exploration stopped at the node budget.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// States occupied in some reachable configuration.
    pub fn covered_states(&self) -> BTreeSet<StateId> {
        self.index
            .keys()
            .flat_map(|c| c.support().cloned())
            .collect()
    }

    /// Shortest run from `c0` to `target`, if `target` was reached.
    pub fn trace_to(&self, target: &Configuration) -> Option<Trace> {
        self.index.get(target).map(|&i| self.trace_from_node(i))
    }

    fn trace_from_node(&self, mut i: usize) -> Trace {
        let mut steps = Vec::new();
        while let Some((parent, step)) = &self.nodes[i].parent {
            steps.push((step.clone(), self.nodes[i].config.clone()));
            i = *parent;
        }
        steps.reverse();
        Trace {
            initial: self.nodes[i].config.clone(),
            steps,
        }
    }
}

fn check_states<'a, S, I>(sys: &S, states: I) -> Result<(), ExploreError>
where
    S: TransitionSystem + ?Sized,
    I: IntoIterator<Item = &'a StateId>,
{
    match states.into_iter().find(|q| !sys.has_state(q)) {
        Some(q) => Err(ExploreError::UnknownState(q.clone())),
        None => Ok(()),
    }
}

/// Outcome of a BFS that may stop early at a goal.
enum Search {
    Done(ReachResult),
    Found(ReachResult, usize),
}

/// BFS from `seeds`, never entering configurations in `skip`.
fn search<S, G>(
    sys: &S,
    seeds: impl IntoIterator<Item = Configuration>,
    skip: &BTreeSet<Configuration>,
    budget: usize,
    goal: G,
) -> Result<Search, ExploreError>
where
    S: TransitionSystem + ?Sized,
    G: Fn(&Configuration) -> bool,
{
    let mut result = ReachResult {
        nodes: Vec::new(),
        index: BTreeMap::new(),
        population: 0,
        complete: true,
    };
    let over_budget = |result: &mut ReachResult| {
        result.complete = false;
        let explored = result.nodes.len();
        Err(ExploreError::BudgetExceeded {
            explored,
            partial: Some(Box::new(result.clone())),
        })
    };

    for seed in seeds {
        if skip.contains(&seed) || result.index.contains_key(&seed) {
            continue;
        }
        if result.nodes.len() >= budget {
            return over_budget(&mut result);
        }
        result.population = seed.population();
        result.index.insert(seed.clone(), result.nodes.len());
        result.nodes.push(Node {
            config: seed,
            parent: None,
        });
        if goal(&result.nodes[result.nodes.len() - 1].config) {
            let i = result.nodes.len() - 1;
            return Ok(Search::Found(result, i));
        }
    }

    let mut head = 0;
    while head < result.nodes.len() {
        let current = result.nodes[head].config.clone();
        for (step, next) in sys.step_successors(&current) {
            if skip.contains(&next) || result.index.contains_key(&next) {
                continue;
            }
            if result.nodes.len() >= budget {
                return over_budget(&mut result);
            }
            let i = result.nodes.len();
            result.index.insert(next.clone(), i);
            result.nodes.push(Node {
                config: next,
                parent: Some((head, step)),
            });
            if goal(&result.nodes[i].config) {
                return Ok(Search::Found(result, i));
            }
        }
        head += 1;
    }
    Ok(Search::Done(result))
}

/// All configurations reachable from `c0`.
pub fn post_star<S>(sys: &S, c0: &Configuration, budget: usize) -> Result<ReachResult, ExploreError>
where
    S: TransitionSystem + ?Sized,
{
    check_states(sys, c0.support())?;
    match search(sys, [c0.clone()], &BTreeSet::new(), budget, |_| false)? {
        Search::Done(mut r) | Search::Found(mut r, _) => {
            r.population = c0.population();
            Ok(r)
        }
    }
}

/// Every configuration of population `n` inside `cube`, over `states`,
/// in ascending lexicographic order of count vectors (`states` order).
///
/// States the cube bounds but `states` omits are treated as absent.
pub fn cube_configs(states: &[StateId], cube: &Cube, n: u32) -> Vec<Configuration> {
    fn go(
        intervals: &[(StateId, Interval)],
        remaining: u32,
        prefix: &mut Vec<(StateId, u32)>,
        out: &mut Vec<Configuration>,
    ) {
        let Some(((q, interval), rest)) = intervals.split_first() else {
            if remaining == 0 {
                out.push(Configuration::from_counts(prefix.iter().cloned()));
            }
            return;
        };
        let hi = interval.upper.min(remaining);
        if interval.lower > hi {
            return;
        }
        // Prune: the remaining states must be able to absorb what is left.
        let room: Option<u64> = rest.iter().try_fold(0u64, |acc, (_, i)| match i.upper {
            crate::Bound::Finite(u) => Some(acc + u64::from(u)),
            crate::Bound::Infinite => None,
        });
        for k in interval.lower..=hi {
            if let Some(room) = room {
                if u64::from(remaining - k) > room {
                    continue;
                }
            }
            prefix.push((q.clone(), k));
            go(rest, remaining - k, prefix, out);
            prefix.pop();
        }
    }

    let missing_required = cube
        .bounds()
        .any(|(q, i)| i.lower > 0 && !states.contains(q));
    if missing_required {
        return Vec::new();
    }
    let intervals: Vec<(StateId, Interval)> = states
        .iter()
        .map(|q| (q.clone(), cube.interval(q)))
        .collect();
    let mut out = Vec::new();
    go(&intervals, n, &mut Vec::new(), &mut out);
    out
}

/// Answer of a reachability search restricted to finitely many populations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedOutcome {
    /// A shortest run (for the first initial configuration, in enumeration
    /// order, that reaches the target) ending inside the target cube.
    Reachable(Trace),
    /// No witness at the explored populations. Not a proof of
    /// unreachability.
    NoAtBounds { explored: usize },
}

/// Searches for a run from some configuration in `from` to some configuration
/// in `to`, trying each population of `populations` in turn.
pub fn reach_bounded<S>(
    sys: &S,
    from: &Cube,
    to: &Cube,
    populations: RangeInclusive<u32>,
    budget: usize,
) -> Result<BoundedOutcome, ExploreError>
where
    S: TransitionSystem + ?Sized,
{
    from.check_consistent()?;
    to.check_consistent()?;
    if populations.is_empty() {
        return Err(ExploreError::EmptyRange);
    }
    check_states(sys, from.bounds().map(|(q, _)| q))?;
    check_states(sys, to.bounds().map(|(q, _)| q))?;

    let mut explored = 0;
    for n in populations {
        // Configurations fully explored at this population without meeting
        // the target; nothing reachable from them can meet it either.
        let mut dead = BTreeSet::new();
        for init in cube_configs(sys.states(), from, n) {
            if dead.contains(&init) {
                continue;
            }
            match search(sys, [init], &dead, budget, |c| to.contains(c))? {
                Search::Found(r, i) => return Ok(BoundedOutcome::Reachable(r.trace_from_node(i))),
                Search::Done(r) => {
                    explored += r.nodes.len();
                    dead.extend(r.index.into_keys());
                }
            }
        }
    }
    Ok(BoundedOutcome::NoAtBounds { explored })
}

/// States occupied in some configuration reachable from an initial
/// configuration with support inside `support` and population at most
/// `max_pop`.
pub fn coverable_states_explicit<S>(
    sys: &S,
    support: &BTreeSet<StateId>,
    max_pop: u32,
    budget: usize,
) -> Result<BTreeSet<StateId>, ExploreError>
where
    S: TransitionSystem + ?Sized,
{
    check_states(sys, support)?;
    let cube = support
        .iter()
        .fold(Cube::initial(), |c, q| c.with(q.clone(), Interval::ANY));
    let seeds = (1..=max_pop).flat_map(|n| cube_configs(sys.states(), &cube, n));
    match search(sys, seeds, &BTreeSet::new(), budget, |_| false)? {
        Search::Done(r) | Search::Found(r, _) => Ok(r.covered_states()),
    }
}
