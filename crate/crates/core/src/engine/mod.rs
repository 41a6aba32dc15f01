//! Decremental connectivity on a bipartite graph where only characters are
//! ever deactivated.
//!
//! Four engines share the [`DcEngine`] interface:
//!
//! * [`NaiveEngine`] recomputes every component after each deactivation;
//! * [`SparseEngine`] keeps a decomposition tree over the characters and
//!   recomputes every ancestor of the deactivated leaf, `O(N log N)` each;
//! * [`OptimalEngine`] uses the same tree but only repairs the component that
//!   actually splits, stopping as soon as a level shows no split. Total
//!   update time over all deactivations is `O(N^2)`;
//! * [`RectAdapter`] runs square sub-engines on groups of characters or
//!   species so that unbalanced instances keep the square bounds.

mod naive;
mod optimal;
mod rect;
mod tree;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub use naive::NaiveEngine;
pub use optimal::{search_from, Color, ColorEpochMap, IterationTrace, OptimalEngine, SearchOutcome};
pub use rect::{GroupMode, RectAdapter};
pub use tree::{DecompositionTree, SparseEngine};

use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::graph::{BipartiteGraph, ComponentId, ComponentListRep, ComponentRef, VertexId};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Naive,
    Sparse,
    Optimal,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [EngineKind::Naive, EngineKind::Sparse, EngineKind::Optimal];

    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Naive => "naive",
            EngineKind::Sparse => "sparse",
            EngineKind::Optimal => "optimal",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EngineKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "naive" => Ok(EngineKind::Naive),
            "sparse" => Ok(EngineKind::Sparse),
            "optimal" => Ok(EngineKind::Optimal),
            other => Err(format!("unknown engine {other:?} (expected naive, sparse or optimal)")),
        }
    }
}

/// One piece of a split component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitChild {
    pub id: ComponentId,
    pub species: Vec<usize>,
    pub chars: Vec<usize>,
}

impl SplitChild {
    pub fn len(&self) -> usize {
        self.species.len() + self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// How one top-level component broke apart after deactivating `removed`.
///
/// `children` partition the parent's members minus the removed characters.
/// One child means nothing split; zero children means the parent consisted
/// only of removed characters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitReport {
    pub removed: Vec<usize>,
    pub parent: ComponentId,
    pub parent_size: usize,
    pub children: Vec<SplitChild>,
}

impl SplitReport {
    pub fn k(&self) -> usize {
        self.children.len()
    }

    pub fn is_split(&self) -> bool {
        self.children.len() >= 2
    }
}

pub trait DcEngine: Send {
    fn name(&self) -> &'static str;

    fn n_species(&self) -> usize;

    fn n_chars(&self) -> usize;

    fn is_active(&self, c: usize) -> bool;

    /// Performs the update for one character without building a report.
    /// Callers normally go through [`DcEngine::deactivate`] or
    /// [`DcEngine::deactivate_batch`], which also call [`DcEngine::sync`].
    fn apply_deactivation(&mut self, c: usize) -> Result<()>;

    /// Brings [`DcEngine::query`] up to date after raw updates.
    fn sync(&mut self) {}

    /// Components of the subgraph induced by all species and the active characters.
    fn query(&self) -> &ComponentListRep;

    /// Total counted operations, preprocessing included.
    fn ops(&self) -> u64;

    /// Operations spent building the structure.
    fn preprocess_ops(&self) -> u64;

    /// Counter that report construction is charged to.
    fn counter(&self) -> &OpCounter;

    fn deactivate(&mut self, c: usize) -> Result<SplitReport> {
        let mut reports = self.deactivate_batch(&[c])?;
        Ok(reports.pop().expect("one report per touched component"))
    }

    /// Deactivates `chars` one by one and reports one coalesced split per
    /// top-level component that contained any of them, in order of first
    /// occurrence in `chars`.
    fn deactivate_batch(&mut self, chars: &[usize]) -> Result<Vec<SplitReport>> {
        struct Group {
            parent: ComponentId,
            removed: Vec<usize>,
            members: Vec<VertexId>,
        }
        let ops = self.counter().clone();
        let mut groups: Vec<Group> = Vec::new();
        {
            let rep = self.query();
            let mut by_comp: HashMap<ComponentRef, usize> = HashMap::new();
            let mut seen = std::collections::HashSet::new();
            for &c in chars {
                if c >= self.n_chars() {
                    return Err(Error::CharOutOfRange(c));
                }
                if !self.is_active(c) || !seen.insert(c) {
                    return Err(Error::AlreadyDeactivated(c));
                }
                let comp = rep.component_of(VertexId::character(c)).expect("active character has a component");
                let gi = *by_comp.entry(comp).or_insert_with(|| {
                    groups.push(Group { parent: rep.component_id(comp), removed: Vec::new(), members: rep.members(comp).collect() });
                    groups.len() - 1
                });
                groups[gi].removed.push(c);
            }
        }
        for &c in chars {
            self.apply_deactivation(c)?;
        }
        self.sync();
        let rep = self.query();
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            ops.add(g.members.len() as u64);
            let mut children: Vec<SplitChild> = Vec::new();
            let mut slot: HashMap<ComponentRef, usize> = HashMap::new();
            for &v in &g.members {
                let Some(comp) = rep.component_of(v) else { continue };
                let i = *slot.entry(comp).or_insert_with(|| {
                    children.push(SplitChild { id: rep.component_id(comp), species: Vec::new(), chars: Vec::new() });
                    children.len() - 1
                });
                if v.is_species() {
                    children[i].species.push(v.index);
                } else {
                    children[i].chars.push(v.index);
                }
            }
            out.push(SplitReport { removed: g.removed, parent: g.parent, parent_size: g.members.len(), children });
        }
        Ok(out)
    }
}

/// Engine of the given kind for a square-or-not graph; unbalanced graphs
/// are split into square groups by [`RectAdapter`].
pub fn build_engine(kind: EngineKind, graph: &BipartiteGraph) -> Box<dyn DcEngine> {
    Box::new(RectAdapter::new(kind, graph))
}

/// Engine of the given kind over the whole graph, without grouping.
pub fn square_engine(kind: EngineKind, graph: &BipartiteGraph) -> Box<dyn DcEngine> {
    match kind {
        EngineKind::Naive => Box::new(NaiveEngine::new(graph)),
        EngineKind::Sparse => Box::new(SparseEngine::new(graph)),
        EngineKind::Optimal => Box::new(OptimalEngine::new(graph)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, static_components, Partition};
    use crate::matrix::IncompleteMatrix;

    fn all_kinds(g: &BipartiteGraph) -> Vec<Box<dyn DcEngine>> {
        let mut v: Vec<Box<dyn DcEngine>> = EngineKind::ALL.iter().map(|&k| square_engine(k, g)).collect();
        v.extend(EngineKind::ALL.iter().map(|&k| build_engine(k, g)));
        v
    }

    fn graph(rows: &[&str]) -> BipartiteGraph {
        build_graph(&IncompleteMatrix::from_rows(rows).unwrap())
    }

    #[test]
    fn bridge_removal_splits_in_two() {
        // path s0 - c0 - s1
        let g = graph(&["1", "1"]);
        for mut e in all_kinds(&g) {
            let r = e.deactivate(0).unwrap();
            assert_eq!(r.k(), 2, "{}", e.name());
            assert_eq!(r.parent_size, 3);
            let mut sets: Vec<_> = r.children.iter().map(|c| c.species.clone()).collect();
            sets.sort();
            assert_eq!(sets, vec![vec![0], vec![1]]);
        }
    }

    #[test]
    fn second_star_keeps_species_joined() {
        let g = graph(&["11", "11", "11", "11"]);
        for mut e in all_kinds(&g) {
            let r = e.deactivate(0).unwrap();
            assert_eq!(r.k(), 1, "{}", e.name());
            assert_eq!(r.children[0].species.len(), 4);
            assert_eq!(r.children[0].chars, vec![1]);
        }
    }

    #[test]
    fn isolated_character_leaves_no_children() {
        let g = graph(&["01", "01"]);
        for mut e in all_kinds(&g) {
            let r = e.deactivate(0).unwrap();
            assert_eq!(r.k(), 0, "{}", e.name());
            assert_eq!(r.parent_size, 1);
        }
    }

    #[test]
    fn double_deactivation_is_an_error() {
        let g = graph(&["10", "01"]);
        for mut e in all_kinds(&g) {
            e.deactivate(1).unwrap();
            assert_eq!(e.deactivate(1).unwrap_err(), Error::AlreadyDeactivated(1));
            assert_eq!(e.deactivate(2).unwrap_err(), Error::CharOutOfRange(2));
            assert_eq!(e.deactivate_batch(&[0, 0]).unwrap_err(), Error::AlreadyDeactivated(0));
        }
    }

    #[test]
    fn batch_coalesces_per_parent() {
        // component A = {s0,s1,c0,c1}, component B = {s2,c2}
        let g = graph(&["110", "010", "001"]);
        for mut e in all_kinds(&g) {
            let reports = e.deactivate_batch(&[0, 2, 1]).unwrap();
            assert_eq!(reports.len(), 2, "{}", e.name());
            assert_eq!(reports[0].removed, vec![0, 1]);
            assert_eq!(reports[0].k(), 2);
            assert_eq!(reports[1].removed, vec![2]);
            assert_eq!(reports[1].k(), 1);
            assert_eq!(e.query().partition(), Partition::from_sets((0..3).map(|i| vec![VertexId::species(i)]).collect()));
        }
    }

    #[test]
    fn identity_matrix_deactivation() {
        let g = graph(&["10", "01"]);
        for mut e in all_kinds(&g) {
            e.deactivate(0).unwrap();
            let expect = static_components(&g, &[1]).unwrap().partition();
            assert_eq!(e.query().partition(), expect, "{}", e.name());
        }
    }

    #[test]
    fn engine_kind_parses() {
        for k in EngineKind::ALL {
            assert_eq!(k.name().parse::<EngineKind>().unwrap(), k);
        }
        assert!("fast".parse::<EngineKind>().is_err());
    }
}
