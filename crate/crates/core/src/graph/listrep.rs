//! List-representation of the connected components of a bipartite graph.
//!
//! Each component keeps one doubly-linked list of species and one of
//! characters, plus their lengths. A flat per-vertex array records the
//! owning component and the list links, so finding a vertex's component,
//! moving a vertex to another component and removing it all take a constant
//! number of pointer updates. Components themselves form a doubly-linked
//! list threaded through a slab of records.
//!
//! The same structure doubles as a star forest: the center of a component is
//! its first species, or its first character when it has no species. The
//! center is adjacent to every other member, every other member is adjacent
//! only to the center. Star edges need not be edges of the underlying graph.

use std::fmt;

use crate::counter::OpCounter;
use crate::error::{Error, Result};

use super::VertexId;

const NIL: u32 = u32::MAX;
const SPECIES: usize = 0;
const CHARS: usize = 1;

/// Which vertices a representation can hold: all `n_species` species and the
/// characters `char_lo..char_lo + n_chars`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub n_species: usize,
    pub char_lo: usize,
    pub n_chars: usize,
}

impl Layout {
    pub const fn new(n_species: usize, char_lo: usize, n_chars: usize) -> Self {
        Self { n_species, char_lo, n_chars }
    }

    #[inline]
    pub fn slots(&self) -> usize {
        self.n_species + self.n_chars
    }

    #[inline]
    pub fn slot(&self, v: VertexId) -> Option<usize> {
        if v.is_species() {
            (v.index < self.n_species).then_some(v.index)
        } else {
            let off = v.index.checked_sub(self.char_lo)?;
            (off < self.n_chars).then_some(self.n_species + off)
        }
    }

    #[inline]
    pub fn vertex(&self, slot: usize) -> VertexId {
        if slot < self.n_species {
            VertexId::species(slot)
        } else {
            VertexId::character(self.char_lo + slot - self.n_species)
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.slot(v).is_some()
    }
}

/// Handle to a component record. Valid until that component is freed.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentRef(pub(crate) u32);

/// Stable component identifier; ids are handed out in increasing order and
/// never reused within one representation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct ComponentId(pub u64);

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}", self.0)
    }
}

#[derive(Copy, Clone, Debug)]
struct Cell {
    comp: u32,
    prev: u32,
    next: u32,
}

impl Cell {
    const EMPTY: Cell = Cell { comp: NIL, prev: NIL, next: NIL };
}

#[derive(Clone, Debug)]
struct Comp {
    id: u64,
    head: [u32; 2],
    tail: [u32; 2],
    count: [u32; 2],
    prev: u32,
    next: u32,
    live: bool,
}

#[derive(Clone, Debug)]
pub struct ComponentListRep {
    layout: Layout,
    cells: Vec<Cell>,
    comps: Vec<Comp>,
    free: Vec<u32>,
    head: u32,
    tail: u32,
    live: usize,
    active: usize,
    next_id: u64,
    ops: OpCounter,
}

impl ComponentListRep {
    /// Empty representation: no active vertices, no components.
    pub fn new(layout: Layout) -> Self {
        Self::with_counter(layout, OpCounter::new())
    }

    pub fn with_counter(layout: Layout, ops: OpCounter) -> Self {
        Self {
            layout,
            cells: vec![Cell::EMPTY; layout.slots()],
            comps: Vec::new(),
            free: Vec::new(),
            head: NIL,
            tail: NIL,
            live: 0,
            active: 0,
            next_id: 0,
            ops,
        }
    }

    /// Builds a representation from explicit member sets, in the given order.
    pub fn from_sets(layout: Layout, sets: &[Vec<VertexId>]) -> Result<Self> {
        let mut rep = Self::new(layout);
        for set in sets {
            let c = rep.create_component();
            for &v in set {
                rep.insert(v, c)?;
            }
        }
        Ok(rep)
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn counter(&self) -> &OpCounter {
        &self.ops
    }

    /// Number of live components, including freshly created empty ones.
    pub fn component_count(&self) -> usize {
        self.live
    }

    pub fn active_count(&self) -> usize {
        self.active
    }

    #[inline]
    fn side(&self, slot: u32) -> usize {
        if (slot as usize) < self.layout.n_species {
            SPECIES
        } else {
            CHARS
        }
    }

    #[inline]
    fn slot_of(&self, v: VertexId) -> Result<usize> {
        self.layout.slot(v).ok_or(Error::OutOfLayout(v))
    }

    fn check_live(&self, c: ComponentRef) -> Result<()> {
        match self.comps.get(c.0 as usize) {
            Some(comp) if comp.live => Ok(()),
            _ => Err(Error::StaleComponent),
        }
    }

    /// Whether `c` refers to a component that has not been freed.
    pub fn is_live(&self, c: ComponentRef) -> bool {
        self.check_live(c).is_ok()
    }

    pub fn is_active(&self, v: VertexId) -> bool {
        self.layout.slot(v).is_some_and(|s| self.cells[s].comp != NIL)
    }

    #[inline]
    pub fn component_of(&self, v: VertexId) -> Option<ComponentRef> {
        let s = self.layout.slot(v)?;
        let c = self.cells[s].comp;
        (c != NIL).then_some(ComponentRef(c))
    }

    pub fn component_id(&self, c: ComponentRef) -> ComponentId {
        ComponentId(self.comps[c.0 as usize].id)
    }

    pub fn species_count(&self, c: ComponentRef) -> usize {
        self.comps[c.0 as usize].count[SPECIES] as usize
    }

    pub fn char_count(&self, c: ComponentRef) -> usize {
        self.comps[c.0 as usize].count[CHARS] as usize
    }

    pub fn size(&self, c: ComponentRef) -> usize {
        let comp = &self.comps[c.0 as usize];
        (comp.count[SPECIES] + comp.count[CHARS]) as usize
    }

    /// First species of the component, or its first character if it has none.
    #[inline]
    pub fn center(&self, c: ComponentRef) -> Option<VertexId> {
        let slot = self.center_slot(c.0);
        (slot != NIL).then(|| self.layout.vertex(slot as usize))
    }

    #[inline]
    fn center_slot(&self, c: u32) -> u32 {
        let comp = &self.comps[c as usize];
        if comp.head[SPECIES] != NIL {
            comp.head[SPECIES]
        } else {
            comp.head[CHARS]
        }
    }

    /// Creates an empty component appended to the component list.
    pub fn create_component(&mut self) -> ComponentRef {
        self.ops.tick();
        let rec = Comp {
            id: self.next_id,
            head: [NIL; 2],
            tail: [NIL; 2],
            count: [0; 2],
            prev: self.tail,
            next: NIL,
            live: true,
        };
        self.next_id += 1;
        let idx = match self.free.pop() {
            Some(i) => {
                self.comps[i as usize] = rec;
                i
            }
            None => {
                self.comps.push(rec);
                (self.comps.len() - 1) as u32
            }
        };
        if self.tail != NIL {
            self.comps[self.tail as usize].next = idx;
        } else {
            self.head = idx;
        }
        self.tail = idx;
        self.live += 1;
        ComponentRef(idx)
    }

    fn free_component(&mut self, c: u32) {
        self.ops.tick();
        let (prev, next) = {
            let comp = &mut self.comps[c as usize];
            comp.live = false;
            (comp.prev, comp.next)
        };
        if prev != NIL {
            self.comps[prev as usize].next = next;
        } else {
            self.head = next;
        }
        if next != NIL {
            self.comps[next as usize].prev = prev;
        } else {
            self.tail = prev;
        }
        self.free.push(c);
        self.live -= 1;
    }

    #[inline]
    fn link(&mut self, slot: u32, c: u32) {
        self.ops.tick();
        let side = self.side(slot);
        let comp = &mut self.comps[c as usize];
        let tail = comp.tail[side];
        comp.tail[side] = slot;
        comp.count[side] += 1;
        if tail == NIL {
            comp.head[side] = slot;
        }
        self.cells[slot as usize] = Cell { comp: c, prev: tail, next: NIL };
        if tail != NIL {
            self.cells[tail as usize].next = slot;
        }
    }

    /// Unlinks an active slot; frees its component if it becomes empty.
    #[inline]
    fn unlink(&mut self, slot: u32) {
        self.ops.tick();
        let side = self.side(slot);
        let Cell { comp: c, prev, next } = self.cells[slot as usize];
        if prev != NIL {
            self.cells[prev as usize].next = next;
        } else {
            self.comps[c as usize].head[side] = next;
        }
        if next != NIL {
            self.cells[next as usize].prev = prev;
        } else {
            self.comps[c as usize].tail[side] = prev;
        }
        self.cells[slot as usize] = Cell::EMPTY;
        let comp = &mut self.comps[c as usize];
        comp.count[side] -= 1;
        if comp.count == [0, 0] {
            self.free_component(c);
        }
    }

    /// Activates `v` and appends it to component `c`.
    pub fn insert(&mut self, v: VertexId, c: ComponentRef) -> Result<()> {
        let slot = self.slot_of(v)?;
        if self.cells[slot].comp != NIL {
            return Err(Error::AlreadyActive(v));
        }
        self.check_live(c)?;
        self.link(slot as u32, c.0);
        self.active += 1;
        Ok(())
    }

    /// Moves active vertex `v` to the tail of `target`. The source component
    /// is freed if this empties it. Moving into the current component is a no-op.
    pub fn move_vertex(&mut self, v: VertexId, target: ComponentRef) -> Result<()> {
        let slot = self.slot_of(v)?;
        let cur = self.cells[slot].comp;
        if cur == NIL {
            return Err(Error::InactiveVertex(v));
        }
        self.check_live(target)?;
        if cur == target.0 {
            return Ok(());
        }
        self.unlink(slot as u32);
        self.link(slot as u32, target.0);
        Ok(())
    }

    /// Deactivates `v`, freeing its component if this empties it.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let slot = self.slot_of(v)?;
        if self.cells[slot].comp == NIL {
            return Err(Error::InactiveVertex(v));
        }
        self.unlink(slot as u32);
        self.active -= 1;
        Ok(())
    }

    /// Drops every component and deactivates every vertex. Ids keep increasing.
    pub(crate) fn clear(&mut self) {
        self.ops.add(self.cells.len() as u64 + 1);
        self.cells.fill(Cell::EMPTY);
        self.comps.clear();
        self.free.clear();
        self.head = NIL;
        self.tail = NIL;
        self.live = 0;
        self.active = 0;
    }

    pub fn components(&self) -> impl Iterator<Item = ComponentRef> + '_ {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let c = cur;
            cur = self.comps[c as usize].next;
            Some(ComponentRef(c))
        })
    }

    /// Members of `c`: species first, then characters, in list order.
    pub fn members(&self, c: ComponentRef) -> Members<'_> {
        let comp = &self.comps[c.0 as usize];
        Members { rep: self, cur: comp.head[SPECIES], next_head: comp.head[CHARS] }
    }

    pub fn species_of(&self, c: ComponentRef) -> Members<'_> {
        let comp = &self.comps[c.0 as usize];
        Members { rep: self, cur: comp.head[SPECIES], next_head: NIL }
    }

    pub fn chars_of(&self, c: ComponentRef) -> Members<'_> {
        let comp = &self.comps[c.0 as usize];
        Members { rep: self, cur: comp.head[CHARS], next_head: NIL }
    }

    /// Adjacency of `v` in the simulated star forest. Empty when `v` is not
    /// active here or is alone in its component.
    #[inline]
    pub fn star_neighbors(&self, v: VertexId) -> StarNeighbors<'_> {
        let Some(slot) = self.layout.slot(v) else {
            return StarNeighbors::empty(self);
        };
        let c = self.cells[slot].comp;
        if c == NIL {
            return StarNeighbors::empty(self);
        }
        let center = self.center_slot(c);
        if center as usize == slot {
            let comp = &self.comps[c as usize];
            StarNeighbors {
                rep: self,
                single: NIL,
                cur: comp.head[SPECIES],
                next_head: comp.head[CHARS],
                skip: center,
            }
        } else {
            StarNeighbors { rep: self, single: center, cur: NIL, next_head: NIL, skip: NIL }
        }
    }

    /// Canonical, layout-independent view of the non-empty components.
    pub fn partition(&self) -> Partition {
        let sets = self
            .components()
            .filter(|&c| self.size(c) > 0)
            .map(|c| self.members(c).collect())
            .collect();
        Partition::from_sets(sets)
    }

    /// Validates every structural invariant; used by tests.
    pub fn check(&self) -> std::result::Result<(), String> {
        let mut seen_active = 0usize;
        let mut live = 0usize;
        let mut prev = NIL;
        let mut cur = self.head;
        while cur != NIL {
            let comp = &self.comps[cur as usize];
            if !comp.live {
                return Err(format!("dead component {cur} in list"));
            }
            if comp.prev != prev {
                return Err(format!("component {cur} has bad prev link"));
            }
            for side in [SPECIES, CHARS] {
                let mut len = 0u32;
                let mut p = NIL;
                let mut s = comp.head[side];
                while s != NIL {
                    let cell = self.cells[s as usize];
                    if cell.comp != cur || cell.prev != p || self.side(s) != side {
                        return Err(format!("slot {s} inconsistent in component {cur}"));
                    }
                    len += 1;
                    p = s;
                    s = cell.next;
                }
                if p != comp.tail[side] || len != comp.count[side] {
                    return Err(format!("component {cur} side {side} tail/count mismatch"));
                }
                seen_active += len as usize;
            }
            live += 1;
            prev = cur;
            cur = comp.next;
        }
        if prev != self.tail {
            return Err("component list tail mismatch".into());
        }
        if live != self.live {
            return Err(format!("live count {} but {} listed", self.live, live));
        }
        let active_cells = self.cells.iter().filter(|c| c.comp != NIL).count();
        if seen_active != self.active || active_cells != self.active {
            return Err(format!("active count {} vs listed {seen_active} vs cells {active_cells}", self.active));
        }
        Ok(())
    }
}

/// Iterator over a component's members; each step counts as one adjacency advance.
pub struct Members<'a> {
    rep: &'a ComponentListRep,
    cur: u32,
    next_head: u32,
}

impl Iterator for Members<'_> {
    type Item = VertexId;

    #[inline]
    fn next(&mut self) -> Option<VertexId> {
        if self.cur == NIL {
            if self.next_head == NIL {
                return None;
            }
            self.cur = self.next_head;
            self.next_head = NIL;
        }
        let s = self.cur;
        self.cur = self.rep.cells[s as usize].next;
        self.rep.ops.tick();
        Some(self.rep.layout.vertex(s as usize))
    }
}

/// Adjacency list of one vertex in the simulated star forest.
pub struct StarNeighbors<'a> {
    rep: &'a ComponentListRep,
    single: u32,
    cur: u32,
    next_head: u32,
    skip: u32,
}

impl<'a> StarNeighbors<'a> {
    fn empty(rep: &'a ComponentListRep) -> Self {
        Self { rep, single: NIL, cur: NIL, next_head: NIL, skip: NIL }
    }
}

impl Iterator for StarNeighbors<'_> {
    type Item = VertexId;

    #[inline]
    fn next(&mut self) -> Option<VertexId> {
        if self.single != NIL {
            let s = self.single;
            self.single = NIL;
            self.rep.ops.tick();
            return Some(self.rep.layout.vertex(s as usize));
        }
        loop {
            if self.cur == NIL {
                if self.next_head == NIL {
                    return None;
                }
                self.cur = self.next_head;
                self.next_head = NIL;
            }
            let s = self.cur;
            self.cur = self.rep.cells[s as usize].next;
            if s != self.skip {
                self.rep.ops.tick();
                return Some(self.rep.layout.vertex(s as usize));
            }
        }
    }
}

/// A set partition in canonical form: members sorted, sets sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition(Vec<Vec<VertexId>>);

impl Partition {
    pub fn from_sets(mut sets: Vec<Vec<VertexId>>) -> Self {
        sets.retain(|s| !s.is_empty());
        for s in &mut sets {
            s.sort_unstable();
        }
        sets.sort_unstable();
        Self(sets)
    }

    pub fn sets(&self) -> &[Vec<VertexId>] {
        &self.0
    }

    pub fn into_sets(self) -> Vec<Vec<VertexId>> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(i: usize) -> VertexId {
        VertexId::species(i)
    }

    fn ch(i: usize) -> VertexId {
        VertexId::character(i)
    }

    fn rep(n: usize, m: usize, sets: &[Vec<VertexId>]) -> ComponentListRep {
        let r = ComponentListRep::from_sets(Layout::new(n, 0, m), sets).unwrap();
        r.check().unwrap();
        r
    }

    #[test]
    fn move_into_fresh_component() {
        let mut r = rep(2, 0, &[vec![sp(0), sp(1)]]);
        let target = r.create_component();
        r.move_vertex(sp(0), target).unwrap();
        r.check().unwrap();
        assert_eq!(r.partition(), Partition::from_sets(vec![vec![sp(1)], vec![sp(0)]]));
        assert_eq!(r.component_of(sp(0)), Some(target));
    }

    #[test]
    fn moving_last_vertex_frees_source() {
        let mut r = rep(2, 0, &[vec![sp(0)], vec![sp(1)]]);
        let src = r.component_of(sp(0)).unwrap();
        let dst = r.component_of(sp(1)).unwrap();
        r.move_vertex(sp(0), dst).unwrap();
        r.check().unwrap();
        assert_eq!(r.component_count(), 1);
        assert!(!r.components().any(|c| c == src));
        assert_eq!(r.move_vertex(sp(0), src), Err(Error::StaleComponent));
    }

    #[test]
    fn move_to_same_target_is_identity() {
        let mut r = rep(2, 1, &[vec![sp(0), ch(0)], vec![sp(1)]]);
        let before = r.partition();
        let c = r.component_of(sp(1)).unwrap();
        for _ in 0..3 {
            r.move_vertex(sp(1), c).unwrap();
        }
        r.check().unwrap();
        assert_eq!(r.partition(), before);
    }

    #[test]
    fn remove_examples() {
        let mut r = rep(1, 1, &[vec![sp(0), ch(0)]]);
        r.remove_vertex(ch(0)).unwrap();
        assert_eq!(r.partition(), Partition::from_sets(vec![vec![sp(0)]]));
        assert_eq!(r.component_of(ch(0)), None);
        assert_eq!(r.remove_vertex(ch(0)), Err(Error::InactiveVertex(ch(0))));
        r.remove_vertex(sp(0)).unwrap();
        assert_eq!(r.component_count(), 0);
        r.check().unwrap();
    }

    #[test]
    fn moving_inactive_vertex_fails() {
        let mut r = rep(2, 1, &[vec![sp(0)]]);
        let c = r.component_of(sp(0)).unwrap();
        assert_eq!(r.move_vertex(sp(1), c), Err(Error::InactiveVertex(sp(1))));
        assert_eq!(r.move_vertex(ch(3), c), Err(Error::OutOfLayout(ch(3))));
    }

    #[test]
    fn star_adjacency_examples() {
        let r = rep(2, 1, &[vec![sp(0), sp(1), ch(0)]]);
        let c = r.component_of(sp(0)).unwrap();
        assert_eq!(r.center(c), Some(sp(0)));
        assert_eq!(r.star_neighbors(sp(1)).collect::<Vec<_>>(), vec![sp(0)]);
        assert_eq!(r.star_neighbors(sp(0)).collect::<Vec<_>>(), vec![sp(1), ch(0)]);
        assert_eq!(r.star_neighbors(ch(0)).collect::<Vec<_>>(), vec![sp(0)]);

        let r = rep(1, 1, &[vec![sp(0)], vec![ch(0)]]);
        assert_eq!(r.star_neighbors(sp(0)).count(), 0);
        assert_eq!(r.star_neighbors(ch(0)).count(), 0);
    }

    #[test]
    fn center_prefers_species_even_if_inserted_later() {
        let r = rep(1, 2, &[vec![ch(1), ch(0), sp(0)]]);
        let c = r.component_of(ch(0)).unwrap();
        assert_eq!(r.center(c), Some(sp(0)));
        assert_eq!(r.members(c).collect::<Vec<_>>(), vec![sp(0), ch(1), ch(0)]);
    }

    #[test]
    fn ids_are_never_reused() {
        let mut r = rep(2, 0, &[vec![sp(0)], vec![sp(1)]]);
        let a = r.component_of(sp(0)).unwrap();
        let old = r.component_id(a);
        r.remove_vertex(sp(0)).unwrap();
        let fresh = r.create_component();
        assert_eq!(fresh, a, "slot is recycled");
        assert!(r.component_id(fresh) > old);
    }

    #[test]
    fn offset_layout_maps_characters() {
        let l = Layout::new(2, 4, 3);
        assert_eq!(l.slot(ch(4)), Some(2));
        assert_eq!(l.slot(ch(6)), Some(4));
        assert_eq!(l.slot(ch(7)), None);
        assert_eq!(l.slot(ch(3)), None);
        assert_eq!(l.vertex(3), ch(5));
    }

    #[test]
    fn updates_cost_constant_operations() {
        let mut r = rep(3, 2, &[vec![sp(0), sp(1), ch(0)], vec![sp(2), ch(1)]]);
        let t = r.component_of(sp(2)).unwrap();
        let before = r.counter().get();
        r.move_vertex(sp(0), t).unwrap();
        assert!(r.counter().get() - before <= 3);
        let before = r.counter().get();
        r.remove_vertex(ch(1)).unwrap();
        assert!(r.counter().get() - before <= 3);
    }
}
