use alloc::collections::BTreeMap;
use core::fmt;

use crate::StateId;

/// A finite multiset of states: how many anonymous processes sit in each state.
///
/// Zero counts are never stored, so structural equality is multiset equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    counts: BTreeMap<StateId, u32>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a configuration from `(state, count)` pairs. Repeated states are
    /// summed and zero counts dropped.
    pub fn from_counts<I>(counts: I) -> Self
    where
        I: IntoIterator<Item = (StateId, u32)>,
    {
        let mut c = Self::new();
        for (q, n) in counts {
            c.add(&q, n);
        }
        c
    }

    pub fn get(&self, q: &StateId) -> u32 {
        self.counts.get(q).copied().unwrap_or(0)
    }

    pub fn add(&mut self, q: &StateId, n: u32) {
        if n > 0 {
            *self.counts.entry(q.clone()).or_insert(0) += n;
        }
    }

    /// Removes `n` processes from `q`. Returns `false` and leaves the
    /// configuration untouched if fewer than `n` are present.
    pub fn remove(&mut self, q: &StateId, n: u32) -> bool {
        if n == 0 {
            return true;
        }
        match self.counts.get_mut(q) {
            Some(have) if *have > n => {
                *have -= n;
                true
            }
            Some(have) if *have == n => {
                self.counts.remove(q);
                true
            }
            _ => false,
        }
    }

    /// Moves one process from `from` to `to`.
    pub fn move_one(&mut self, from: &StateId, to: &StateId) -> bool {
        if self.remove(from, 1) {
            self.add(to, 1);
            true
        } else {
            false
        }
    }

    /// Multiset inclusion.
    pub fn contains(&self, other: &Configuration) -> bool {
        other.counts.iter().all(|(q, &n)| self.get(q) >= n)
    }

    /// Multiset sum.
    pub fn plus(&self, other: &Configuration) -> Configuration {
        let mut c = self.clone();
        for (q, &n) in &other.counts {
            c.add(q, n);
        }
        c
    }

    pub fn population(&self) -> u32 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// States with at least one process, in name order.
    pub fn support(&self) -> impl Iterator<Item = &StateId> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StateId, u32)> {
        self.counts.iter().map(|(q, &n)| (q, n))
    }
}

impl FromIterator<StateId> for Configuration {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        Self::from_counts(iter.into_iter().map(|q| (q, 1)))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (q, n)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{q}:{n}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(name: &str) -> StateId {
        StateId::new(name).unwrap()
    }

    #[test]
    fn zero_counts_are_normalized_away() {
        let c = Configuration::from_counts([(s("a"), 0), (s("b"), 2)]);
        assert_eq!(c, Configuration::from_counts([(s("b"), 2)]));
        assert_eq!(c.support().count(), 1);

        let mut d = c.clone();
        assert!(d.remove(&s("b"), 2));
        assert!(d.is_empty());
        assert_eq!(d, Configuration::new());
    }

    #[test]
    fn remove_refuses_to_go_negative() {
        let mut c = Configuration::from_counts([(s("a"), 1)]);
        assert!(!c.remove(&s("a"), 2));
        assert_eq!(c.get(&s("a")), 1);
        assert!(!c.remove(&s("b"), 1));
    }

    #[test]
    fn display_is_sorted_by_name() {
        let c = Configuration::from_counts([(s("b"), 2), (s("a"), 1)]);
        assert_eq!(c.to_string(), "{a:1, b:2}");
        assert_eq!(Configuration::new().to_string(), "{}");
    }

    #[test]
    fn multiset_inclusion_counts_multiplicity() {
        let c = Configuration::from_counts([(s("p"), 1)]);
        let pp = Configuration::from_counts([(s("p"), 2)]);
        assert!(!c.contains(&pp));
        assert!(pp.contains(&c));
        assert!(c.contains(&Configuration::new()));
    }
}
