//! Evaluation and wall-clock budgets.

use core::time::Duration;

/// Source of elapsed time since the start of a run.
pub trait Clock {
    fn elapsed(&self) -> Duration;

    /// Whether `elapsed` reports real time. Wall-clock limits are only
    /// honoured by clocks that do.
    fn is_wall_clock(&self) -> bool {
        true
    }
}

/// A clock that never advances. Timing fields of runs driven by it are zero.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed(&self) -> Duration {
        Duration::ZERO
    }

    fn is_wall_clock(&self) -> bool {
        false
    }
}

/// Limits on a search, in heuristic evaluations and/or wall-clock time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BudgetLimits {
    pub max_evals: Option<u64>,
    pub time_limit_ms: Option<u64>,
}

impl BudgetLimits {
    pub fn evals(max_evals: u64) -> Self {
        BudgetLimits {
            max_evals: Some(max_evals),
            time_limit_ms: None,
        }
    }

    pub fn millis(ms: u64) -> Self {
        BudgetLimits {
            max_evals: None,
            time_limit_ms: Some(ms),
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.max_evals.is_some() || self.time_limit_ms.is_some()
    }
}

/// Running tally of heuristic evaluations against a set of limits.
///
/// One evaluation is one computation of `h`, whether over a fresh profile or
/// an incrementally updated one.
pub struct Budget<'c> {
    limits: BudgetLimits,
    clock: &'c dyn Clock,
    used: u64,
}

impl<'c> Budget<'c> {
    pub fn new(limits: BudgetLimits, clock: &'c dyn Clock) -> Self {
        Budget {
            limits,
            clock,
            used: 0,
        }
    }

    /// No limits at all; operators run to completion.
    pub fn unlimited() -> Budget<'static> {
        Budget::new(BudgetLimits::default(), &NoClock)
    }

    #[inline]
    pub fn charge(&mut self) {
        self.used += 1;
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn elapsed(&self) -> Duration {
        self.clock.elapsed()
    }

    pub fn limits(&self) -> BudgetLimits {
        self.limits
    }

    #[inline]
    pub fn exhausted(&self) -> bool {
        if let Some(max) = self.limits.max_evals {
            if self.used >= max {
                return true;
            }
        }
        match self.limits.time_limit_ms {
            Some(ms) if self.clock.is_wall_clock() => {
                self.clock.elapsed() >= Duration::from_millis(ms)
            }
            _ => false,
        }
    }
}
