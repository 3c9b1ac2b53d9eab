use alloc::collections::BTreeMap;
use core::fmt;

use crate::{Configuration, ModelError, StateId};

/// Upper bound of a cube interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Finite(u32),
    Infinite,
}

impl Bound {
    pub fn admits(self, n: u32) -> bool {
        match self {
            Bound::Finite(u) => n <= u,
            Bound::Infinite => true,
        }
    }

    /// The bound clipped to `cap`.
    pub fn min(self, cap: u32) -> u32 {
        match self {
            Bound::Finite(u) => u.min(cap),
            Bound::Infinite => cap,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(u) => write!(f, "{u}"),
            Bound::Infinite => f.write_str("*"),
        }
    }
}

/// Per-state count interval `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lower: u32,
    pub upper: Bound,
}

impl Interval {
    pub const ANY: Interval = Interval {
        lower: 0,
        upper: Bound::Infinite,
    };
    pub const ZERO: Interval = Interval {
        lower: 0,
        upper: Bound::Finite(0),
    };
    pub const AT_LEAST_ONE: Interval = Interval {
        lower: 1,
        upper: Bound::Infinite,
    };

    pub fn new(lower: u32, upper: Bound) -> Self {
        Self { lower, upper }
    }

    pub fn exactly(n: u32) -> Self {
        Self::new(n, Bound::Finite(n))
    }

    pub fn contains(&self, n: u32) -> bool {
        self.lower <= n && self.upper.admits(n)
    }

    pub fn is_consistent(&self) -> bool {
        self.upper.admits(self.lower)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lower, self.upper)
    }
}

/// Decides the interval of states a cube does not mention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CubeRole {
    /// Unmentioned states must be empty: `[0,0]`.
    Initial,
    /// Unmentioned states are unconstrained: `[0,∞]`.
    Target,
}

impl CubeRole {
    pub fn default_interval(self) -> Interval {
        match self {
            CubeRole::Initial => Interval::ZERO,
            CubeRole::Target => Interval::ANY,
        }
    }
}

/// A set of configurations given by a count interval per state.
///
/// Cubes are not validated on construction; [`Cube::check_consistent`] reports
/// an interval whose lower bound exceeds its upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cube {
    role: CubeRole,
    bounds: BTreeMap<StateId, Interval>,
}

impl Cube {
    pub fn new(role: CubeRole) -> Self {
        Self {
            role,
            bounds: BTreeMap::new(),
        }
    }

    pub fn initial() -> Self {
        Self::new(CubeRole::Initial)
    }

    pub fn target() -> Self {
        Self::new(CubeRole::Target)
    }

    pub fn with(mut self, q: StateId, interval: Interval) -> Self {
        self.set(q, interval);
        self
    }

    pub fn set(&mut self, q: StateId, interval: Interval) {
        self.bounds.insert(q, interval);
    }

    pub fn role(&self) -> CubeRole {
        self.role
    }

    pub fn interval(&self, q: &StateId) -> Interval {
        self.bounds
            .get(q)
            .copied()
            .unwrap_or_else(|| self.role.default_interval())
    }

    /// Explicitly bounded states with their intervals, in name order.
    pub fn bounds(&self) -> impl Iterator<Item = (&StateId, Interval)> {
        self.bounds.iter().map(|(q, i)| (q, *i))
    }

    pub fn check_consistent(&self) -> Result<(), ModelError> {
        match self.bounds.iter().find(|(_, i)| !i.is_consistent()) {
            Some((q, _)) => Err(ModelError::Inconsistent(q.clone())),
            None => Ok(()),
        }
    }

    /// `L(q) <= c(q) <= U(q)` for every state.
    pub fn contains(&self, c: &Configuration) -> bool {
        self.bounds.iter().all(|(q, i)| i.contains(c.get(q)))
            && c.iter()
                .filter(|(q, _)| !self.bounds.contains_key(*q))
                .all(|(_, n)| self.role.default_interval().contains(n))
    }

    /// The smallest member: every state at its lower bound.
    pub fn min_config(&self) -> Result<Configuration, ModelError> {
        self.check_consistent()?;
        Ok(Configuration::from_counts(
            self.bounds.iter().map(|(q, i)| (q.clone(), i.lower)),
        ))
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (q, iv)) in self.bounds.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{q}:{iv}")?;
        }
        Ok(())
    }
}
