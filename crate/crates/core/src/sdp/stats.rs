//! Process-wide solve counters, used by the acceptance suite to confirm the
//! weak-duality and feasibility invariants held on every solve.

use std::sync::atomic::{AtomicU64, Ordering};

static SOLVES: AtomicU64 = AtomicU64::new(0);
static VIOLATIONS: AtomicU64 = AtomicU64::new(0);
static TROUBLES: AtomicU64 = AtomicU64::new(0);

pub(crate) fn record_solve() {
    SOLVES.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn record_violation() {
    VIOLATIONS.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn record_trouble() {
    TROUBLES.fetch_add(1, Ordering::Relaxed);
}

/// Snapshot of the solver counters.
#[derive(Debug, Clone, Copy)]
pub struct SolveStats {
    /// Total interior-point solves in this process.
    pub solves: u64,
    /// Optimal solutions that violated the weak-duality check.
    pub invariant_violations: u64,
    /// Solves that ended in numerical trouble.
    pub numerical_troubles: u64,
}

/// Reads the process-wide counters.
pub fn solve_stats() -> SolveStats {
    SolveStats {
        solves: SOLVES.load(Ordering::Relaxed),
        invariant_violations: VIOLATIONS.load(Ordering::Relaxed),
        numerical_troubles: TROUBLES.load(Ordering::Relaxed),
    }
}
