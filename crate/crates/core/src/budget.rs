//! Resource budgets for the enumerative operations.
//!
//! Almost everything in this crate walks some fragment of a subset lattice.
//! A [`Budget`] bounds how many states an operation may predictably touch;
//! exceeding it yields [`Error::BudgetExceeded`](crate::Error::BudgetExceeded)
//! instead of an unbounded computation. Search loops that cannot predict
//! their state count up front charge as they go through a [`Meter`].

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default budget: `2^24` states.
pub const DEFAULT_LOG2_STATES: u32 = 24;

/// An upper bound on the number of states an operation may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    max_states: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 1u64 << DEFAULT_LOG2_STATES }
    }
}

impl Budget {
    /// Budget allowing `2^log2_states` states. `log2_states` must be ≤ 62.
    pub fn from_log2(log2_states: u32) -> Result<Budget> {
        if log2_states > 62 {
            return Err(Error::BadParams(format!(
                "budget exponent {log2_states} exceeds 62"
            )));
        }
        Ok(Budget { max_states: 1u64 << log2_states })
    }

    /// Maximum number of states this budget allows.
    pub fn max_states(&self) -> u64 {
        self.max_states
    }

    /// Fails if a predicted `states` count exceeds the budget.
    pub fn charge(&self, states: u64) -> Result<()> {
        if states > self.max_states {
            Err(self.exceeded(states))
        } else {
            Ok(())
        }
    }

    /// Like [`Budget::charge`] but for `2^log2_states` predicted states.
    pub fn charge_log2(&self, log2_states: u32) -> Result<()> {
        if log2_states >= 63 {
            return Err(self.exceeded(u64::MAX));
        }
        self.charge(1u64 << log2_states)
    }

    /// A pay-as-you-go counter bounded by this budget.
    pub fn meter(&self) -> Meter {
        Meter { limit: self.max_states, used: AtomicU64::new(0) }
    }

    fn exceeded(&self, needed: u64) -> Error {
        Error::BudgetExceeded {
            needed_log2: 64 - needed.leading_zeros(),
            limit_log2: 63 - self.max_states.leading_zeros(),
        }
    }
}

/// Shared running counter of visited states; thread-safe so parallel
/// searches can tick a single meter.
#[derive(Debug)]
pub struct Meter {
    limit: u64,
    used: AtomicU64,
}

impl Meter {
    /// Records `states` more visited states, failing once the total
    /// exceeds the originating budget.
    pub fn tick(&self, states: u64) -> Result<()> {
        let before = self.used.fetch_add(states, Ordering::Relaxed);
        let total = before.saturating_add(states);
        if total > self.limit {
            Err(Error::BudgetExceeded {
                needed_log2: 64 - total.leading_zeros(),
                limit_log2: 63 - self.limit.leading_zeros(),
            })
        } else {
            Ok(())
        }
    }

    /// States consumed so far.
    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_budget_is_2_to_24() {
        assert_eq!(Budget::default().max_states(), 1 << 24);
    }

    #[test]
    fn charge_within_budget_succeeds() {
        let b = Budget::from_log2(10).unwrap();
        assert!(b.charge(1024).is_ok());
        assert!(b.charge(1025).is_err());
    }

    #[test]
    fn meter_accumulates_and_trips() {
        let b = Budget::from_log2(4).unwrap();
        let m = b.meter();
        for _ in 0..16 {
            m.tick(1).unwrap();
        }
        assert!(m.tick(1).is_err());
        assert_eq!(m.used(), 17);
    }

    #[test]
    fn oversized_exponent_rejected() {
        assert!(Budget::from_log2(63).is_err());
    }
}
