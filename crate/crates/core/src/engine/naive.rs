use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::graph::{static_components_masked, BipartiteGraph, ComponentListRep};

use super::DcEngine;

/// Baseline that recomputes all components from scratch after every
/// deactivation. `O(N + E)` per update.
pub struct NaiveEngine {
    graph: BipartiteGraph,
    active: Vec<bool>,
    rep: ComponentListRep,
    ops: OpCounter,
    pre_ops: u64,
}

impl NaiveEngine {
    pub fn new(graph: &BipartiteGraph) -> Self {
        let ops = OpCounter::new();
        let active = vec![true; graph.n_chars()];
        let rep = static_components_masked(graph, &active, ops.clone());
        let pre_ops = ops.get();
        Self { graph: graph.clone(), active, rep, ops, pre_ops }
    }
}

impl DcEngine for NaiveEngine {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn n_species(&self) -> usize {
        self.graph.n_species()
    }

    fn n_chars(&self) -> usize {
        self.graph.n_chars()
    }

    fn is_active(&self, c: usize) -> bool {
        self.active.get(c).copied().unwrap_or(false)
    }

    fn apply_deactivation(&mut self, c: usize) -> Result<()> {
        match self.active.get(c) {
            None => return Err(Error::CharOutOfRange(c)),
            Some(false) => return Err(Error::AlreadyDeactivated(c)),
            Some(true) => {}
        }
        self.active[c] = false;
        self.rep = static_components_masked(&self.graph, &self.active, self.ops.clone());
        Ok(())
    }

    fn query(&self) -> &ComponentListRep {
        &self.rep
    }

    fn ops(&self) -> u64 {
        self.ops.get()
    }

    fn preprocess_ops(&self) -> u64 {
        self.pre_ops
    }

    fn counter(&self) -> &OpCounter {
        &self.ops
    }
}
