//! Decomposition tree over the characters and the engine that recomputes
//! every ancestor on each deactivation.

use std::ops::Range;

use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::graph::{rebuild_from_union, BipartiteGraph, ComponentListRep, ComponentRef, Layout, Traversal, VertexId};

use super::DcEngine;

/// Complete binary tree whose leaves are the characters, padded to a power
/// of two. Node `v` (heap order, root = 1, children `2v` and `2v + 1`) holds
/// the components of the subgraph induced by all species and the active
/// characters of its leaf span. Padding characters are never active.
pub struct DecompositionTree {
    n_species: usize,
    n_chars: usize,
    n_pad: usize,
    nodes: Vec<ComponentListRep>,
    active: Vec<bool>,
    ops: OpCounter,
    trav: Traversal,
    scratch: Vec<VertexId>,
}

impl DecompositionTree {
    /// Leaves from the neighbor lists of each character, inner nodes
    /// bottom-up by merging the children's star forests. `O(N^2)` overall.
    pub fn build(graph: &BipartiteGraph, ops: OpCounter) -> Self {
        let n = graph.n_species();
        let m = graph.n_chars();
        let n_pad = m.max(1).next_power_of_two();
        let mut nodes = Vec::with_capacity(2 * n_pad);
        nodes.push(ComponentListRep::with_counter(Layout::new(0, 0, 0), ops.clone()));
        for idx in 1..2 * n_pad {
            let span = span_of(idx, n_pad);
            nodes.push(ComponentListRep::with_counter(Layout::new(n, span.start, span.len()), ops.clone()));
        }
        for c in 0..n_pad {
            let leaf = &mut nodes[n_pad + c];
            let mut in_star = vec![false; n];
            if c < m {
                let k = leaf.create_component();
                for &s in graph.solid(VertexId::character(c)) {
                    ops.tick();
                    in_star[s as usize] = true;
                    leaf.insert(VertexId::species(s as usize), k).expect("fresh leaf");
                }
                leaf.insert(VertexId::character(c), k).expect("fresh leaf");
            }
            for (s, _) in in_star.iter().enumerate().filter(|(_, &b)| !b) {
                let k = leaf.create_component();
                leaf.insert(VertexId::species(s), k).expect("fresh leaf");
            }
        }
        let mut trav = Traversal::default();
        for idx in (1..n_pad).rev() {
            let (head, tail) = nodes.split_at_mut(2 * idx);
            rebuild_from_union(&mut head[idx], &tail[0], &tail[1], &mut trav);
        }
        Self { n_species: n, n_chars: m, n_pad, nodes, active: vec![true; m], ops, trav, scratch: Vec::new() }
    }

    pub fn n_species(&self) -> usize {
        self.n_species
    }

    pub fn n_chars(&self) -> usize {
        self.n_chars
    }

    /// Padded character count; the number of leaves.
    pub fn size(&self) -> usize {
        self.n_pad
    }

    pub fn depth(&self) -> u32 {
        self.n_pad.trailing_zeros()
    }

    pub fn node_count(&self) -> usize {
        2 * self.n_pad - 1
    }

    pub fn root(&self) -> &ComponentListRep {
        &self.nodes[1]
    }

    pub fn node(&self, idx: usize) -> &ComponentListRep {
        &self.nodes[idx]
    }

    pub fn leaf_of_char(&self, c: usize) -> usize {
        self.n_pad + c
    }

    pub fn span(&self, idx: usize) -> Range<usize> {
        span_of(idx, self.n_pad)
    }

    pub fn is_active(&self, c: usize) -> bool {
        self.active.get(c).copied().unwrap_or(false)
    }

    pub fn counter(&self) -> &OpCounter {
        &self.ops
    }

    fn check_active(&self, c: usize) -> Result<()> {
        match self.active.get(c) {
            None => Err(Error::CharOutOfRange(c)),
            Some(false) => Err(Error::AlreadyDeactivated(c)),
            Some(true) => Ok(()),
        }
    }

    /// Removes `c` from its leaf and turns the rest of its leaf component
    /// into singletons. Returns the pieces (all species singletons), or
    /// nothing when `c` had no neighbors.
    pub(crate) fn split_leaf(&mut self, c: usize, pieces: &mut Vec<ComponentRef>) -> Result<()> {
        self.check_active(c)?;
        self.active[c] = false;
        pieces.clear();
        let leaf = &mut self.nodes[self.n_pad + c];
        let cv = VertexId::character(c);
        let k = leaf.component_of(cv).expect("active character is in its leaf");
        leaf.remove_vertex(cv)?;
        if !leaf.is_live(k) {
            return Ok(());
        }
        self.scratch.clear();
        self.scratch.extend(leaf.species_of(k));
        pieces.push(k);
        for &s in self.scratch.iter().skip(1) {
            let single = leaf.create_component();
            leaf.move_vertex(s, single)?;
            pieces.push(single);
        }
        Ok(())
    }

    /// Recomputes every ancestor of `c`'s leaf from its two children.
    pub fn sparse_deactivate(&mut self, c: usize) -> Result<()> {
        let mut pieces = Vec::new();
        self.split_leaf(c, &mut pieces)?;
        let mut v = (self.n_pad + c) / 2;
        while v >= 1 {
            let (head, tail) = self.nodes.split_at_mut(2 * v);
            rebuild_from_union(&mut head[v], &tail[0], &tail[1], &mut self.trav);
            v /= 2;
        }
        Ok(())
    }

    /// Split borrow of node `v` and its children `(2v, 2v + 1)`.
    pub(crate) fn family_mut(&mut self, v: usize) -> (&mut ComponentListRep, &ComponentListRep, &ComponentListRep) {
        let (head, tail) = self.nodes.split_at_mut(2 * v);
        let (l, r) = tail.split_at(1);
        (&mut head[v], &l[0], &r[0])
    }

    pub(crate) fn node_mut(&mut self, idx: usize) -> &mut ComponentListRep {
        &mut self.nodes[idx]
    }
}

fn span_of(idx: usize, n_pad: usize) -> Range<usize> {
    let depth = usize::BITS - 1 - idx.leading_zeros();
    let width = n_pad >> depth;
    let lo = (idx - (1 << depth)) * width;
    lo..lo + width
}

/// Decomposition-tree engine that recomputes each ancestor from its
/// children: `O(N log N)` per deactivation, `O(N^2 log N)` in total.
pub struct SparseEngine {
    tree: DecompositionTree,
    pre_ops: u64,
}

impl SparseEngine {
    pub fn new(graph: &BipartiteGraph) -> Self {
        let tree = DecompositionTree::build(graph, OpCounter::new());
        let pre_ops = tree.counter().get();
        Self { tree, pre_ops }
    }

    pub fn tree(&self) -> &DecompositionTree {
        &self.tree
    }
}

impl DcEngine for SparseEngine {
    fn name(&self) -> &'static str {
        "sparse"
    }

    fn n_species(&self) -> usize {
        self.tree.n_species()
    }

    fn n_chars(&self) -> usize {
        self.tree.n_chars()
    }

    fn is_active(&self, c: usize) -> bool {
        self.tree.is_active(c)
    }

    fn apply_deactivation(&mut self, c: usize) -> Result<()> {
        self.tree.sparse_deactivate(c)
    }

    fn query(&self) -> &ComponentListRep {
        self.tree.root()
    }

    fn ops(&self) -> u64 {
        self.tree.counter().get()
    }

    fn preprocess_ops(&self) -> u64 {
        self.pre_ops
    }

    fn counter(&self) -> &OpCounter {
        self.tree.counter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, static_components, Partition};
    use crate::matrix::IncompleteMatrix;

    fn graph(rows: &[&str]) -> BipartiteGraph {
        build_graph(&IncompleteMatrix::from_rows(rows).unwrap())
    }

    fn node_oracle(t: &DecompositionTree, g: &BipartiteGraph, idx: usize) -> Partition {
        let chars: Vec<usize> = t.span(idx).filter(|&c| t.is_active(c)).collect();
        static_components(g, &chars).unwrap().partition()
    }

    #[test]
    fn spans_follow_heap_order() {
        assert_eq!(span_of(1, 4), 0..4);
        assert_eq!(span_of(2, 4), 0..2);
        assert_eq!(span_of(3, 4), 2..4);
        assert_eq!(span_of(7, 4), 3..4);
        assert_eq!(span_of(1, 1), 0..1);
    }

    #[test]
    fn k44_every_node_is_one_component() {
        let g = graph(&["1111"; 4]);
        let t = DecompositionTree::build(&g, OpCounter::new());
        assert_eq!(t.depth(), 2);
        assert_eq!(t.node_count(), 7);
        for idx in 1..8 {
            let p = t.node(idx).partition();
            assert_eq!(p.sets().len(), 1, "node {idx}");
            let expect: Vec<VertexId> =
                (0..4).map(VertexId::species).chain(t.span(idx).map(VertexId::character)).collect();
            assert_eq!(p.sets()[0], expect);
            t.node(idx).check().unwrap();
        }
    }

    #[test]
    fn empty_graph_gives_singletons() {
        let g = graph(&["000", "000"]);
        let t = DecompositionTree::build(&g, OpCounter::new());
        assert_eq!(t.size(), 4);
        for idx in 1..8 {
            let p = t.node(idx).partition();
            assert!(p.sets().iter().all(|s| s.len() == 1));
            assert_eq!(p, node_oracle(&t, &g, idx));
        }
    }

    #[test]
    fn single_character_is_single_leaf() {
        let g = graph(&["1", "1"]);
        let mut t = DecompositionTree::build(&g, OpCounter::new());
        assert_eq!(t.node_count(), 1);
        assert_eq!(t.leaf_of_char(0), 1);
        t.sparse_deactivate(0).unwrap();
        assert_eq!(t.root().partition(), Partition::from_sets(vec![vec![VertexId::species(0)], vec![VertexId::species(1)]]));
    }

    #[test]
    fn identity_deactivation_matches_oracle() {
        let g = graph(&["10", "01"]);
        let mut t = DecompositionTree::build(&g, OpCounter::new());
        t.sparse_deactivate(0).unwrap();
        let expect = Partition::from_sets(vec![
            vec![VertexId::species(0)],
            vec![VertexId::species(1), VertexId::character(1)],
        ]);
        assert_eq!(t.root().partition(), expect);
        assert_eq!(t.sparse_deactivate(0).unwrap_err(), Error::AlreadyDeactivated(0));
    }

    #[test]
    fn every_node_tracks_its_subgraph() {
        let g = graph(&["11000", "01100", "00110", "10011", "00001"]);
        let mut t = DecompositionTree::build(&g, OpCounter::new());
        for c in [2, 0, 4, 1, 3] {
            t.sparse_deactivate(c).unwrap();
            for idx in 1..=t.node_count() {
                assert_eq!(t.node(idx).partition(), node_oracle(&t, &g, idx), "node {idx} after c{c}");
                t.node(idx).check().unwrap();
            }
        }
    }
}
