//! Budgets for exhaustive enumeration.

use crate::error::{Error, Result};
use std::time::{Duration, Instant};

/// Cap on the number of group elements an operation may enumerate.
///
/// Orbit sweeps, primitive-element listings, coset searches, and the
/// verification grids all check their working-set size against this
/// bound up front and refuse (rather than stall) when it is exceeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepBound(pub u64);

impl Default for SweepBound {
    fn default() -> Self {
        SweepBound(1 << 21)
    }
}

impl SweepBound {
    /// Errors unless `needed` elements fit within the bound.
    pub fn admit(self, needed: u64) -> Result<()> {
        if needed > self.0 {
            return Err(Error::ResourceBound {
                needed,
                bound: self.0,
            });
        }
        Ok(())
    }
}

/// Optional wall-clock deadline for a single verification point.
///
/// Long-running verifiers poll `expired` inside their hot loops and bail
/// out with an inconclusive status instead of overrunning; a default
/// budget never expires, so library results stay deterministic.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Budget {
            deadline: Some(Instant::now() + timeout),
        }
    }

    pub fn expired(&self) -> bool {
        matches!(self.deadline, Some(d) if Instant::now() >= d)
    }
}
