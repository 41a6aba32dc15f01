//! Instrumented operation counting.
//!
//! Complexity claims are checked against a machine-independent counter
//! rather than wall-clock time. The counted events are:
//!
//! * list-cell touches: linking or unlinking a vertex cell, creating or
//!   freeing a component record, resetting a slot during a rebuild;
//! * adjacency advances: every neighbor produced while walking a star
//!   forest, a graph adjacency list or a component member list;
//! * color reads and color writes in the search procedure;
//! * vertex visits in breadth-first traversals;
//! * per-pair and per-cell checks performed by the solver.
//!
//! Every component of one engine shares a single counter so that a
//! before/after difference measures exactly the work of one call.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Shared handle to a monotonically increasing event counter.
///
/// Each counter has a single writer at a time; increments use a relaxed
/// load followed by a relaxed store, which is sufficient because engines
/// are never mutated from two threads at once.
#[derive(Clone, Debug, Default)]
pub struct OpCounter(Arc<AtomicU64>);

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn tick(&self) {
        self.add(1);
    }

    #[inline]
    pub fn add(&self, n: u64) {
        let v = self.0.load(Ordering::Relaxed);
        self.0.store(v + n, Ordering::Relaxed);
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    /// True when both handles point at the same underlying counter.
    pub fn shares_with(&self, other: &OpCounter) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clones_share_state() {
        let a = OpCounter::new();
        let b = a.clone();
        a.tick();
        b.add(4);
        assert_eq!(a.get(), 5);
        assert!(a.shares_with(&b));
        assert!(!a.shares_with(&OpCounter::new()));
    }
}
