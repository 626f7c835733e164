use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Step budget shared by every Gröbner computation inside one top-level call.
///
/// One step is one reduction step (a single leading-term cancellation) or one
/// enumerated candidate, depending on the consumer.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
    verify: bool,
}

impl Budget {
    pub const DEFAULT_STEPS: u64 = 1_000_000;

    pub fn new(limit: u64) -> Self {
        Budget {
            limit,
            used: AtomicU64::new(0),
            verify: cfg!(debug_assertions),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    /// Toggle the post-construction Buchberger-criterion check on emitted bases.
    pub fn with_verification(mut self, verify: bool) -> Self {
        self.verify = verify;
        self
    }

    pub fn verifies(&self) -> bool {
        self.verify
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }

    pub fn charge(&self, steps: u64) -> Result<()> {
        let before = self.used.fetch_add(steps, Ordering::Relaxed);
        if before.saturating_add(steps) > self.limit {
            Err(Error::BudgetExceeded { limit: self.limit })
        } else {
            Ok(())
        }
    }

    /// A fresh budget with the same verification setting.
    pub fn fresh(&self, limit: u64) -> Budget {
        Budget::new(limit).with_verification(self.verify)
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_STEPS)
    }
}

impl Clone for Budget {
    fn clone(&self) -> Self {
        Budget {
            limit: self.limit,
            used: AtomicU64::new(self.used()),
            verify: self.verify,
        }
    }
}
