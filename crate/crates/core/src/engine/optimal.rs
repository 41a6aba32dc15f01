//! Amortized `O(N^2)` total-update engine.
//!
//! After removing `c` from its leaf, the update walks up the tree. At each
//! ancestor `v` it knows how the component `K` of `c` in the child split into
//! pieces `K_1..K_k` (largest first). Let `L` be the component of `c` in `v`.
//! Every piece except `K_1` is the start of a search over the union of the
//! child's and the sibling's star forests. A search that reaches a vertex
//! connected to `K_1` stops at once; otherwise it has found a new component,
//! which is split out of `L`. The work per level is linear in `|L| - |K_1|`.
//! Once a level yields no new component the remaining ancestors only drop
//! `c`, at constant cost each.

use crate::counter::OpCounter;
use crate::error::Result;
use crate::graph::{BipartiteGraph, ComponentListRep, ComponentRef, VertexId};

use super::tree::DecompositionTree;
use super::DcEngine;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Color {
    /// Not yet assigned.
    White,
    /// Visited by the search that is currently running.
    Gray,
    /// Connected to the largest piece.
    Red,
    /// In a new component split off from `L`.
    Black,
}

impl Color {
    fn code(self) -> u8 {
        self as u8
    }

    fn from_code(code: u8) -> Color {
        match code {
            0 => Color::White,
            1 => Color::Gray,
            2 => Color::Red,
            _ => Color::Black,
        }
    }
}

/// Per-vertex colors with O(1) reset.
///
/// A stored color is only valid while its stamp equals the current epoch.
/// Members of the implicit red component read as red without any stored
/// color, so initializing "`K_1` red, the rest white" costs one increment.
#[derive(Debug)]
pub struct ColorEpochMap {
    n_species: usize,
    epoch: u32,
    stamp: Vec<u32>,
    color: Vec<u8>,
    implicit_red: Option<ComponentRef>,
    ops: OpCounter,
}

impl ColorEpochMap {
    /// Colors for `n_species` species and `n_chars` characters.
    pub fn new(n_species: usize, n_chars: usize, ops: OpCounter) -> Self {
        let len = n_species + n_chars;
        Self { n_species, epoch: 1, stamp: vec![0; len], color: vec![0; len], implicit_red: None, ops }
    }

    /// Starts a new epoch: every vertex is white except members of
    /// `implicit_red` in the representation later passed to [`Self::get`].
    pub fn reset(&mut self, implicit_red: Option<ComponentRef>) {
        self.ops.tick();
        if self.epoch == u32::MAX {
            self.stamp.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.implicit_red = implicit_red;
    }

    pub fn implicit_red(&self) -> Option<ComponentRef> {
        self.implicit_red
    }

    /// Effective color of `v`; `red_rep` is the representation in which the
    /// implicit red component lives.
    #[inline]
    pub fn get(&self, v: VertexId, red_rep: &ComponentListRep) -> Color {
        self.ops.tick();
        let i = v.flat(self.n_species);
        if self.stamp[i] == self.epoch {
            return Color::from_code(self.color[i]);
        }
        match self.implicit_red {
            Some(k1) if red_rep.component_of(v) == Some(k1) => Color::Red,
            _ => Color::White,
        }
    }

    #[inline]
    pub fn set(&mut self, v: VertexId, color: Color) {
        self.ops.tick();
        let i = v.flat(self.n_species);
        self.stamp[i] = self.epoch;
        self.color[i] = color.code();
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// The start vertex, or something reachable from it, is red.
    MergedIntoK1,
    /// The start vertex already belongs to a component found earlier.
    AlreadySeparated,
    /// A new component of the parent, split out of `L`.
    NewComponent(ComponentRef),
}

/// Search from `x` over the union of the star forests of `child` (already
/// updated) and `sibling`. On success the visited vertices are moved out of
/// component `l` of `parent` into a fresh component.
#[allow(clippy::too_many_arguments)]
pub fn search_from(
    x: VertexId,
    child: &ComponentListRep,
    sibling: &ComponentListRep,
    parent: &mut ComponentListRep,
    l: ComponentRef,
    colors: &mut ColorEpochMap,
    stack: &mut Vec<VertexId>,
    visited: &mut Vec<VertexId>,
) -> SearchOutcome {
    match colors.get(x, child) {
        Color::Red => return SearchOutcome::MergedIntoK1,
        Color::Black => return SearchOutcome::AlreadySeparated,
        Color::Gray => unreachable!("no search is in progress"),
        Color::White => {}
    }
    stack.clear();
    visited.clear();
    colors.set(x, Color::Gray);
    stack.push(x);
    visited.push(x);
    while let Some(y) = stack.pop() {
        for z in child.star_neighbors(y).chain(sibling.star_neighbors(y)) {
            match colors.get(z, child) {
                Color::Red => {
                    for &v in visited.iter() {
                        colors.set(v, Color::Red);
                    }
                    return SearchOutcome::MergedIntoK1;
                }
                Color::White => {
                    colors.set(z, Color::Gray);
                    stack.push(z);
                    visited.push(z);
                }
                Color::Gray => {}
                Color::Black => debug_assert!(false, "black vertices form closed components"),
            }
        }
    }
    let k = parent.create_component();
    for &v in visited.iter() {
        debug_assert_eq!(parent.component_of(v), Some(l));
        parent.move_vertex(v, k).expect("visited vertices are active in the parent");
        colors.set(v, Color::Black);
    }
    SearchOutcome::NewComponent(k)
}

/// Cost record of one ancestor iteration that ran searches.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct IterationTrace {
    pub node: usize,
    /// `|L|` before removing the deactivated character.
    pub l_size: usize,
    pub k1_size: usize,
    /// Size of the largest piece other than `K_1`.
    pub max_other: usize,
    /// Number of pieces coming from the child.
    pub k: usize,
    /// Pieces of `L` produced for the next level.
    pub produced: usize,
    pub ops_delta: u64,
}

pub struct OptimalEngine {
    tree: DecompositionTree,
    colors: ColorEpochMap,
    pieces: Vec<ComponentRef>,
    next_pieces: Vec<ComponentRef>,
    stack: Vec<VertexId>,
    visited: Vec<VertexId>,
    trace: Option<Vec<IterationTrace>>,
    pre_ops: u64,
}

impl OptimalEngine {
    pub fn new(graph: &BipartiteGraph) -> Self {
        let ops = OpCounter::new();
        let tree = DecompositionTree::build(graph, ops.clone());
        let colors = ColorEpochMap::new(graph.n_species(), tree.size(), ops.clone());
        let pre_ops = ops.get();
        Self {
            tree,
            colors,
            pieces: Vec::new(),
            next_pieces: Vec::new(),
            stack: Vec::new(),
            visited: Vec::new(),
            trace: None,
            pre_ops,
        }
    }

    pub fn tree(&self) -> &DecompositionTree {
        &self.tree
    }

    /// Starts recording an [`IterationTrace`] for every searching iteration.
    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    pub fn take_trace(&mut self) -> Vec<IterationTrace> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn fast_deactivate(&mut self, c: usize) -> Result<()> {
        let cv = VertexId::character(c);
        let ops = self.tree.counter().clone();
        self.tree.split_leaf(c, &mut self.pieces)?;
        let mut child = self.tree.leaf_of_char(c);
        while child > 1 {
            let v = child / 2;
            if self.pieces.len() < 2 {
                // No split below: c only leaves its component from here up.
                self.tree.node_mut(v).remove_vertex(cv)?;
                child = v;
                continue;
            }
            let before = ops.get();
            let (parent, left, right) = self.tree.family_mut(v);
            let (child_rep, sibling) = if child.is_multiple_of(2) { (left, right) } else { (right, left) };

            let l = parent.component_of(cv).expect("c is active in every ancestor");
            let l_size = parent.size(l);
            parent.remove_vertex(cv)?;

            ops.add(self.pieces.len() as u64);
            let k1 = *self
                .pieces
                .iter()
                .max_by(|&&a, &&b| {
                    child_rep
                        .size(a)
                        .cmp(&child_rep.size(b))
                        .then_with(|| child_rep.component_id(b).cmp(&child_rep.component_id(a)))
                })
                .expect("at least two pieces");
            let k1_size = child_rep.size(k1);
            let max_other = match self.trace {
                Some(_) => self.pieces.iter().filter(|&&p| p != k1).map(|&p| child_rep.size(p)).max().unwrap_or(0),
                None => 0,
            };
            self.colors.reset(Some(k1));

            self.next_pieces.clear();
            self.next_pieces.push(l);
            for &p in &self.pieces {
                if p == k1 {
                    continue;
                }
                let x = child_rep.center(p).expect("pieces are non-empty");
                let outcome = search_from(
                    x,
                    child_rep,
                    sibling,
                    parent,
                    l,
                    &mut self.colors,
                    &mut self.stack,
                    &mut self.visited,
                );
                if let SearchOutcome::NewComponent(k) = outcome {
                    self.next_pieces.push(k);
                }
            }
            if let Some(t) = self.trace.as_mut() {
                t.push(IterationTrace {
                    node: v,
                    l_size,
                    k1_size,
                    max_other,
                    k: self.pieces.len(),
                    produced: self.next_pieces.len(),
                    ops_delta: ops.get() - before,
                });
            }
            std::mem::swap(&mut self.pieces, &mut self.next_pieces);
            child = v;
        }
        Ok(())
    }
}

impl DcEngine for OptimalEngine {
    fn name(&self) -> &'static str {
        "optimal"
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
        self.fast_deactivate(c)
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
