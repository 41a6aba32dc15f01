use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::graph::{union_of_forests, BipartiteGraph, ComponentListRep, ForestPart};

use super::{square_engine, DcEngine, EngineKind};

/// How the adapter splits an unbalanced graph into square pieces.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GroupMode {
    /// `n == m`: a single engine over the whole graph.
    Identity,
    /// `m > n`: characters in groups of `n`, each with every species.
    CharGroups,
    /// `n > m`: species in groups of `m`, each with every character.
    SpeciesGroups,
}

struct Group {
    engine: Box<dyn DcEngine>,
    species_lo: usize,
    char_lo: usize,
}

/// Runs square sub-engines over groups of size `min(n, m)` (the last group
/// may be smaller). A deactivation goes to the sub-engine owning the
/// character, or to all of them when species are grouped. The global
/// partition is the union of the sub-engines' star forests, rebuilt by
/// [`DcEngine::sync`] in time linear in `n + m`.
pub struct RectAdapter {
    mode: GroupMode,
    n: usize,
    m: usize,
    group: usize,
    groups: Vec<Group>,
    active: Vec<bool>,
    rep: ComponentListRep,
    ops: OpCounter,
    pre_ops: u64,
}

impl RectAdapter {
    pub fn new(kind: EngineKind, graph: &BipartiteGraph) -> Self {
        let n = graph.n_species();
        let m = graph.n_chars();
        let mode = match n.cmp(&m) {
            std::cmp::Ordering::Equal => GroupMode::Identity,
            std::cmp::Ordering::Less => GroupMode::CharGroups,
            std::cmp::Ordering::Greater => GroupMode::SpeciesGroups,
        };
        let group = n.min(m).max(1);
        let mut groups = Vec::new();
        match mode {
            GroupMode::Identity => groups.push(Group { engine: square_engine(kind, graph), species_lo: 0, char_lo: 0 }),
            GroupMode::CharGroups => {
                for lo in (0..m).step_by(group) {
                    let hi = (lo + group).min(m);
                    let sub = graph.restrict(0..n, lo..hi);
                    groups.push(Group { engine: square_engine(kind, &sub), species_lo: 0, char_lo: lo });
                }
            }
            GroupMode::SpeciesGroups => {
                for lo in (0..n).step_by(group) {
                    let hi = (lo + group).min(n);
                    let sub = graph.restrict(lo..hi, 0..m);
                    groups.push(Group { engine: square_engine(kind, &sub), species_lo: lo, char_lo: 0 });
                }
            }
        }
        let ops = OpCounter::new();
        let rep = ComponentListRep::with_counter(crate::graph::Layout::new(0, 0, 0), ops.clone());
        let mut adapter = Self { mode, n, m, group, groups, active: vec![true; m], rep, ops, pre_ops: 0 };
        adapter.sync();
        adapter.pre_ops = adapter.ops();
        adapter
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn group_size(&self) -> usize {
        self.group
    }

    pub fn sub_engines(&self) -> impl Iterator<Item = &dyn DcEngine> {
        self.groups.iter().map(|g| g.engine.as_ref())
    }
}

impl DcEngine for RectAdapter {
    fn name(&self) -> &'static str {
        self.groups[0].engine.name()
    }

    fn n_species(&self) -> usize {
        self.n
    }

    fn n_chars(&self) -> usize {
        self.m
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
        match self.mode {
            GroupMode::Identity | GroupMode::SpeciesGroups => {
                for g in &mut self.groups {
                    g.engine.apply_deactivation(c)?;
                }
            }
            GroupMode::CharGroups => {
                let g = &mut self.groups[c / self.group];
                g.engine.apply_deactivation(c - g.char_lo)?;
            }
        }
        self.active[c] = false;
        Ok(())
    }

    fn sync(&mut self) {
        for g in &mut self.groups {
            g.engine.sync();
        }
        if self.mode == GroupMode::Identity {
            return;
        }
        let parts: Vec<ForestPart<'_>> = self
            .groups
            .iter()
            .map(|g| ForestPart { rep: g.engine.query(), species_offset: g.species_lo, char_offset: g.char_lo })
            .collect();
        self.rep = union_of_forests(self.n, self.m, &parts, &self.ops);
    }

    fn query(&self) -> &ComponentListRep {
        match self.mode {
            GroupMode::Identity => self.groups[0].engine.query(),
            _ => &self.rep,
        }
    }

    fn ops(&self) -> u64 {
        self.ops.get() + self.groups.iter().map(|g| g.engine.ops()).sum::<u64>()
    }

    fn preprocess_ops(&self) -> u64 {
        self.pre_ops
    }

    fn counter(&self) -> &OpCounter {
        &self.ops
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::static_components;

    /// Deterministic 0/1 pattern without pulling in a generator.
    fn pseudo_graph(n: usize, m: usize, seed: u64) -> BipartiteGraph {
        let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
        let mut edges = Vec::new();
        for s in 0..n {
            for c in 0..m {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                if x.is_multiple_of(3) {
                    edges.push((s, c));
                }
            }
        }
        BipartiteGraph::from_solid_edges(n, m, &edges).unwrap()
    }

    #[test]
    fn char_groups_route_to_one_engine() {
        let g = BipartiteGraph::from_solid_edges(2, 4, &[(0, 0), (1, 1), (0, 2), (1, 3)]).unwrap();
        let mut a = RectAdapter::new(EngineKind::Optimal, &g);
        assert_eq!(a.mode(), GroupMode::CharGroups);
        assert_eq!(a.sub_engines().count(), 2);
        a.deactivate(3).unwrap();
        let first = a.sub_engines().next().unwrap();
        assert!(first.is_active(0) && first.is_active(1));
        let second = a.sub_engines().nth(1).unwrap();
        assert!(second.is_active(0) && !second.is_active(1));
    }

    #[test]
    fn species_groups_broadcast() {
        let g = pseudo_graph(5, 2, 3);
        let a = RectAdapter::new(EngineKind::Sparse, &g);
        assert_eq!(a.mode(), GroupMode::SpeciesGroups);
        assert_eq!(a.group_size(), 2);
        assert_eq!(a.sub_engines().count(), 3);
    }

    #[test]
    fn square_is_identity() {
        let g = pseudo_graph(3, 3, 1);
        let a = RectAdapter::new(EngineKind::Naive, &g);
        assert_eq!(a.mode(), GroupMode::Identity);
        assert_eq!(a.sub_engines().count(), 1);
        assert_eq!(a.query().partition(), static_components(&g, &[0, 1, 2]).unwrap().partition());
    }

    #[test]
    fn rectangular_queries_match_oracle() {
        for seed in 0..20 {
            for (n, m) in [(4, 16), (16, 4), (3, 7)] {
                let g = pseudo_graph(n, m, seed);
                for kind in EngineKind::ALL {
                    let mut a = RectAdapter::new(kind, &g);
                    let mut alive: Vec<usize> = (0..m).collect();
                    assert_eq!(a.query().partition(), static_components(&g, &alive).unwrap().partition());
                    let order: Vec<usize> = (0..m).map(|i| (i * 5 + seed as usize) % m).collect();
                    let mut seen = vec![false; m];
                    for c in order.into_iter().chain(0..m) {
                        if std::mem::replace(&mut seen[c], true) {
                            continue;
                        }
                        a.deactivate(c).unwrap();
                        alive.retain(|&x| x != c);
                        assert_eq!(
                            a.query().partition(),
                            static_components(&g, &alive).unwrap().partition(),
                            "{kind} {n}x{m} seed {seed}"
                        );
                        a.query().check().unwrap();
                    }
                }
            }
        }
    }
}
