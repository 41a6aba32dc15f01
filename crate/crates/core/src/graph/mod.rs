//! Bipartite species/character graphs and their component representations.

mod listrep;
mod union;

use std::fmt;

pub use listrep::{ComponentId, ComponentListRep, ComponentRef, Layout, Members, Partition, StarNeighbors};
pub use union::union_components;
pub(crate) use union::{rebuild_from_union, union_of_forests, ForestPart, Traversal};

use crate::counter::OpCounter;
use crate::error::{Error, Result};
use crate::matrix::{CharState, IncompleteMatrix};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Species,
    Character,
}

/// A species or a character, addressed by its ordinal within its side.
///
/// Ordering puts all species before all characters, which matches the
/// flattened index layout `species 0..n, characters n..n+m`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

impl VertexId {
    pub const fn species(index: usize) -> Self {
        Self { side: Side::Species, index }
    }

    pub const fn character(index: usize) -> Self {
        Self { side: Side::Character, index }
    }

    pub fn is_species(self) -> bool {
        self.side == Side::Species
    }

    pub fn is_character(self) -> bool {
        self.side == Side::Character
    }

    /// Flattened index given `n_species` species.
    #[inline]
    pub fn flat(self, n_species: usize) -> usize {
        match self.side {
            Side::Species => self.index,
            Side::Character => n_species + self.index,
        }
    }

    #[inline]
    pub fn from_flat(flat: usize, n_species: usize) -> Self {
        if flat < n_species {
            Self::species(flat)
        } else {
            Self::character(flat - n_species)
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Species => write!(f, "s{}", self.index),
            Side::Character => write!(f, "c{}", self.index),
        }
    }
}

/// Species/character graph with solid (`1`) and optional (`?`) edge classes.
/// Forbidden (`0`) pairs are implied by absence from both classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    n_species: usize,
    n_chars: usize,
    species_solid: Vec<Vec<u32>>,
    char_solid: Vec<Vec<u32>>,
    species_optional: Vec<Vec<u32>>,
    char_optional: Vec<Vec<u32>>,
}

impl BipartiteGraph {
    pub fn empty(n_species: usize, n_chars: usize) -> Self {
        Self {
            n_species,
            n_chars,
            species_solid: vec![Vec::new(); n_species],
            char_solid: vec![Vec::new(); n_chars],
            species_optional: vec![Vec::new(); n_species],
            char_optional: vec![Vec::new(); n_chars],
        }
    }

    /// Graph with the given solid edges `(species, character)` and no optional edges.
    pub fn from_solid_edges(n_species: usize, n_chars: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n_species, n_chars);
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(s, c) in edges {
            if s >= n_species || c >= n_chars {
                return Err(Error::DimensionMismatch(format!("edge (s{s}, c{c}) outside {n_species}x{n_chars}")));
            }
            if seen.insert((s, c)) {
                g.species_solid[s].push(c as u32);
                g.char_solid[c].push(s as u32);
            }
        }
        Ok(g)
    }

    pub fn n_species(&self) -> usize {
        self.n_species
    }

    pub fn n_chars(&self) -> usize {
        self.n_chars
    }

    pub fn n_vertices(&self) -> usize {
        self.n_species + self.n_chars
    }

    /// Solid neighbors of `v` as ordinals on the opposite side.
    pub fn solid(&self, v: VertexId) -> &[u32] {
        match v.side {
            Side::Species => &self.species_solid[v.index],
            Side::Character => &self.char_solid[v.index],
        }
    }

    /// Optional neighbors of `v` as ordinals on the opposite side.
    pub fn optional(&self, v: VertexId) -> &[u32] {
        match v.side {
            Side::Species => &self.species_optional[v.index],
            Side::Character => &self.char_optional[v.index],
        }
    }

    pub fn solid_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let other = move |i: u32| match v.side {
            Side::Species => VertexId::character(i as usize),
            Side::Character => VertexId::species(i as usize),
        };
        self.solid(v).iter().map(move |&i| other(i))
    }

    pub fn solid_edge_count(&self) -> usize {
        self.char_solid.iter().map(Vec::len).sum()
    }

    pub fn optional_edge_count(&self) -> usize {
        self.char_optional.iter().map(Vec::len).sum()
    }

    pub fn solid_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.solid_edge_count());
        for (s, cs) in self.species_solid.iter().enumerate() {
            out.extend(cs.iter().map(|&c| (s, c as usize)));
        }
        out
    }

    /// Subgraph induced by a species range and a character range, renumbered from zero.
    pub fn restrict(&self, species: std::ops::Range<usize>, chars: std::ops::Range<usize>) -> Self {
        let mut g = Self::empty(species.len(), chars.len());
        for c in chars.clone() {
            let lc = c - chars.start;
            for &s in &self.char_solid[c] {
                let s = s as usize;
                if species.contains(&s) {
                    let ls = s - species.start;
                    g.char_solid[lc].push(ls as u32);
                    g.species_solid[ls].push(lc as u32);
                }
            }
            for &s in &self.char_optional[c] {
                let s = s as usize;
                if species.contains(&s) {
                    let ls = s - species.start;
                    g.char_optional[lc].push(ls as u32);
                    g.species_optional[ls].push(lc as u32);
                }
            }
        }
        g
    }
}

/// Classifies every cell of `matrix` into solid, optional or forbidden edges.
pub fn build_graph(matrix: &IncompleteMatrix) -> BipartiteGraph {
    let mut g = BipartiteGraph::empty(matrix.n(), matrix.m());
    for s in 0..matrix.n() {
        for c in 0..matrix.m() {
            match matrix.get(s, c) {
                CharState::One => {
                    g.species_solid[s].push(c as u32);
                    g.char_solid[c].push(s as u32);
                }
                CharState::Unknown => {
                    g.species_optional[s].push(c as u32);
                    g.char_optional[c].push(s as u32);
                }
                CharState::Zero => {}
            }
        }
    }
    g
}

/// Connected components of the solid subgraph induced by all species and
/// `active_chars`, computed by breadth-first search.
pub fn static_components(graph: &BipartiteGraph, active_chars: &[usize]) -> Result<ComponentListRep> {
    let mut mask = vec![false; graph.n_chars()];
    for &c in active_chars {
        *mask.get_mut(c).ok_or(Error::CharOutOfRange(c))? = true;
    }
    Ok(static_components_masked(graph, &mask, OpCounter::new()))
}

pub(crate) fn static_components_masked(graph: &BipartiteGraph, active: &[bool], ops: OpCounter) -> ComponentListRep {
    let n = graph.n_species();
    let layout = Layout::new(n, 0, graph.n_chars());
    let mut rep = ComponentListRep::with_counter(layout, ops.clone());
    let mut seen = vec![false; layout.slots()];
    let mut queue = std::collections::VecDeque::new();
    for slot in 0..layout.slots() {
        let v = layout.vertex(slot);
        if seen[slot] || (v.is_character() && !active[v.index]) {
            continue;
        }
        seen[slot] = true;
        let comp = rep.create_component();
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            ops.tick();
            rep.insert(u, comp).expect("fresh vertex");
            for w in graph.solid_neighbors(u) {
                ops.tick();
                let ws = w.flat(n);
                if !seen[ws] && (w.is_species() || active[w.index]) {
                    seen[ws] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    rep
}
