//! Components of a union of star forests.

use crate::counter::OpCounter;
use crate::error::{Error, Result};

use super::{ComponentListRep, Layout, VertexId};

/// Reusable visited-marks and stack for linear-time traversals.
///
/// Marks are epoch-stamped so starting a new traversal does not clear them.
#[derive(Debug, Default)]
pub(crate) struct Traversal {
    marks: Vec<u32>,
    epoch: u32,
    stack: Vec<VertexId>,
}

impl Traversal {
    pub(crate) fn begin(&mut self, len: usize) {
        if self.marks.len() < len {
            self.marks.resize(len, 0);
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.marks.fill(0);
            self.epoch = 1;
        }
        self.stack.clear();
    }

    /// Marks `i`; returns whether it was unmarked.
    #[inline]
    pub(crate) fn visit(&mut self, i: usize) -> bool {
        if self.marks[i] == self.epoch {
            false
        } else {
            self.marks[i] = self.epoch;
            true
        }
    }
}

/// Rebuilds `target` as the components of the union of the star forests of
/// `left` and `right`. `target`'s layout must cover both inputs; the active
/// vertices of `target` become those active in either input.
pub(crate) fn rebuild_from_union(
    target: &mut ComponentListRep,
    left: &ComponentListRep,
    right: &ComponentListRep,
    tr: &mut Traversal,
) {
    target.clear();
    let layout = target.layout();
    let ops = target.counter().clone();
    tr.begin(layout.slots());
    for slot in 0..layout.slots() {
        let v = layout.vertex(slot);
        if !(left.is_active(v) || right.is_active(v)) || !tr.visit(slot) {
            continue;
        }
        let comp = target.create_component();
        tr.stack.push(v);
        while let Some(y) = tr.stack.pop() {
            ops.tick();
            target.insert(y, comp).expect("each vertex is visited once");
            for z in left.star_neighbors(y).chain(right.star_neighbors(y)) {
                let zs = layout.slot(z).expect("inputs lie inside the target layout");
                if tr.visit(zs) {
                    tr.stack.push(z);
                }
            }
        }
    }
}

/// Components of the union of the star forests of `a` and `b`, which must
/// hold the same active vertex set.
pub fn union_components(a: &ComponentListRep, b: &ComponentListRep) -> Result<ComponentListRep> {
    let layout = a.layout();
    if layout != b.layout() {
        return Err(Error::VertexSetMismatch);
    }
    for slot in 0..layout.slots() {
        let v = layout.vertex(slot);
        if a.is_active(v) != b.is_active(v) {
            return Err(Error::VertexSetMismatch);
        }
    }
    let mut out = ComponentListRep::new(layout);
    rebuild_from_union(&mut out, a, b, &mut Traversal::default());
    Ok(out)
}

/// One sub-representation whose vertices are renumbered into a global graph.
pub(crate) struct ForestPart<'a> {
    pub rep: &'a ComponentListRep,
    pub species_offset: usize,
    pub char_offset: usize,
}

/// Components of the union of several star forests over a global graph
/// with `n` species and `m` characters. Vertices active in no part stay
/// inactive. Linear in `n + m` plus the total size of the parts.
pub(crate) fn union_of_forests(n: usize, m: usize, parts: &[ForestPart<'_>], ops: &OpCounter) -> ComponentListRep {
    let total = n + m;
    let global = |p: &ForestPart<'_>, v: VertexId| -> usize {
        if v.is_species() {
            p.species_offset + v.index
        } else {
            n + p.char_offset + v.index
        }
    };
    let mut active = vec![false; total];
    let mut degree = vec![0u32; total + 1];
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for p in parts {
        for c in p.rep.components() {
            let center = p.rep.center(c);
            let Some(center) = center else { continue };
            let cg = global(p, center);
            for v in p.rep.members(c) {
                let g = global(p, v);
                active[g] = true;
                if g != cg {
                    edges.push((g as u32, cg as u32));
                    degree[g] += 1;
                    degree[cg] += 1;
                }
            }
        }
    }
    // CSR adjacency
    let mut start = vec![0u32; total + 1];
    for i in 0..total {
        start[i + 1] = start[i] + degree[i];
    }
    let mut fill = start.clone();
    let mut adj = vec![0u32; edges.len() * 2];
    for &(a, b) in &edges {
        adj[fill[a as usize] as usize] = b;
        fill[a as usize] += 1;
        adj[fill[b as usize] as usize] = a;
        fill[b as usize] += 1;
    }
    ops.add((total + 2 * edges.len()) as u64);

    let mut rep = ComponentListRep::with_counter(Layout::new(n, 0, m), ops.clone());
    let mut seen = vec![false; total];
    let mut stack = Vec::new();
    for g in 0..total {
        if !active[g] || seen[g] {
            continue;
        }
        seen[g] = true;
        let comp = rep.create_component();
        stack.push(g);
        while let Some(u) = stack.pop() {
            ops.tick();
            rep.insert(VertexId::from_flat(u, n), comp).expect("each vertex is visited once");
            for &w in &adj[start[u] as usize..start[u + 1] as usize] {
                ops.tick();
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
    }
    rep
}
