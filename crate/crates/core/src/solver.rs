//! Round-based solver for incomplete directed perfect phylogeny.
//!
//! Each round looks at every component of the solid-edge graph that still
//! has a character. A character is semiuniversal in its component when no
//! species of the component has a 0 for it. If some component has none the
//! instance is unsolvable. Otherwise all semiuniversal characters are
//! deactivated at once, their unknown entries inside the component become 1
//! and the remaining unknown entries stay 0. The run succeeds once no
//! character is left.
//!
//! Semiuniversality is tracked by a per-character count of solid and
//! unknown entries towards species of the same component, decremented from
//! the split reports of the engine. Every species/character pair is
//! separated at most once, so the total bookkeeping is `O(nm)`.

use std::fmt;

use serde::Serialize;

use crate::counter::OpCounter;
use crate::engine::{build_engine, DcEngine, EngineKind, SplitReport};
use crate::graph::{build_graph, ComponentRef, VertexId};
use crate::matrix::{BinaryMatrix, CharState, IncompleteMatrix};
use crate::phylogeny::{build_tree, Phylogeny, TreeEvent};

/// Component without a semiuniversal character.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub species: Vec<usize>,
    pub chars: Vec<usize>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp: Vec<String> = self.species.iter().map(|s| format!("s{s}")).collect();
        let ch: Vec<String> = self.chars.iter().map(|c| format!("c{c}")).collect();
        write!(f, "species: {}\ncharacters: {}", sp.join(" "), ch.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Yes { completion: BinaryMatrix, tree: Phylogeny },
    No { witness: Witness },
}

impl Solution {
    pub fn is_yes(&self) -> bool {
        matches!(self, Solution::Yes { .. })
    }

    pub fn completion(&self) -> Option<&BinaryMatrix> {
        match self {
            Solution::Yes { completion, .. } => Some(completion),
            Solution::No { .. } => None,
        }
    }

    pub fn tree(&self) -> Option<&Phylogeny> {
        match self {
            Solution::Yes { tree, .. } => Some(tree),
            Solution::No { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Solution::No { witness } => Some(witness),
            Solution::Yes { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Rounds started, including the final one.
    pub rounds: usize,
    /// Characters deactivated in each round that deactivated any.
    pub deactivated: Vec<usize>,
    /// Whether each such round separated at least two species.
    pub separated_species: Vec<bool>,
    pub engine_ops: u64,
    pub solver_ops: u64,
}

impl SolveStats {
    pub fn total_ops(&self) -> u64 {
        self.engine_ops + self.solver_ops
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Continue,
    Yes,
    No,
}

/// Incremental solver state; [`solve`] drives it to completion.
pub struct Solver<'a> {
    a: &'a IncompleteMatrix,
    engine: Box<dyn DcEngine>,
    live: Vec<u32>,
    b: BinaryMatrix,
    events: Vec<TreeEvent>,
    ops: OpCounter,
    stats: SolveStats,
    result: Option<Solution>,
}

impl<'a> Solver<'a> {
    pub fn new(a: &'a IncompleteMatrix, kind: EngineKind) -> Self {
        let ops = OpCounter::new();
        let graph = build_graph(a);
        ops.add((a.n() * a.m()) as u64);
        let engine = build_engine(kind, &graph);
        let mut b = BinaryMatrix::zeros(a.n(), a.m());
        for s in 0..a.n() {
            for c in 0..a.m() {
                if a.get(s, c) == CharState::One {
                    b.set(s, c, true);
                }
            }
        }
        ops.add((a.n() * a.m()) as u64);
        let mut solver =
            Self { a, engine, live: Vec::new(), b, events: Vec::new(), ops, stats: SolveStats::default(), result: None };
        solver.live = solver.recount();
        solver.ops.add((a.n() * a.m()) as u64);
        solver
    }

    /// Count of solid and unknown entries from each active character towards
    /// species of its component, computed from scratch. Inactive characters
    /// get 0.
    pub fn recount(&self) -> Vec<u32> {
        let rep = self.engine.query();
        (0..self.a.m())
            .map(|c| {
                let Some(k) = rep.component_of(VertexId::character(c)) else { return 0 };
                (0..self.a.n())
                    .filter(|&s| {
                        self.a.get(s, c) != CharState::Zero && rep.component_of(VertexId::species(s)) == Some(k)
                    })
                    .count() as u32
            })
            .collect()
    }

    /// Maintained counts, indexed by character. Deactivated characters keep
    /// their last value.
    pub fn counts(&self) -> &[u32] {
        &self.live
    }

    pub fn engine(&self) -> &dyn DcEngine {
        self.engine.as_ref()
    }

    pub fn stats(&self) -> SolveStats {
        let mut s = self.stats.clone();
        s.engine_ops = self.engine.ops();
        s.solver_ops = self.ops.get();
        s
    }

    pub fn result(&self) -> Option<&Solution> {
        self.result.as_ref()
    }

    pub fn step(&mut self) -> Step {
        if let Some(r) = &self.result {
            return if r.is_yes() { Step::Yes } else { Step::No };
        }
        self.stats.rounds += 1;
        let rep = self.engine.query();
        let n = self.a.n();
        let mut batch = Vec::new();
        let mut round_events = Vec::new();
        let mut stuck: Option<(usize, ComponentRef)> = None;
        for k in rep.components() {
            if rep.char_count(k) == 0 {
                continue;
            }
            let sc = rep.species_count(k) as u32;
            self.ops.add(rep.char_count(k) as u64);
            let u: Vec<usize> = rep.chars_of(k).map(|v| v.index).filter(|&c| self.live[c] == sc).collect();
            if u.is_empty() {
                // smallest member decides between several stuck components
                let key = rep.members(k).map(|v| v.flat(n)).min().expect("live component");
                if stuck.is_none_or(|(best, _)| key < best) {
                    stuck = Some((key, k));
                }
                continue;
            }
            let species: Vec<usize> = rep.species_of(k).map(|v| v.index).collect();
            self.ops.add((u.len() * species.len()) as u64);
            for &c in &u {
                for &s in &species {
                    if self.a.get(s, c) == CharState::Unknown {
                        self.b.set(s, c, true);
                    }
                }
            }
            batch.extend_from_slice(&u);
            round_events.push(TreeEvent { species, chars: u });
        }
        if let Some((_, k)) = stuck {
            let mut species: Vec<usize> = rep.species_of(k).map(|v| v.index).collect();
            let mut chars: Vec<usize> = rep.chars_of(k).map(|v| v.index).collect();
            species.sort_unstable();
            chars.sort_unstable();
            self.result = Some(Solution::No { witness: Witness { species, chars } });
            return Step::No;
        }
        if batch.is_empty() {
            let tree = build_tree(&self.events, n);
            self.result = Some(Solution::Yes { completion: self.b.clone(), tree });
            return Step::Yes;
        }
        if let Some(&prev) = self.stats.separated_species.last() {
            assert!(prev, "a round that left every species group intact was followed by another round");
        }
        self.events.extend(round_events);
        let reports = self.engine.deactivate_batch(&batch).expect("batch holds distinct active characters");
        let separated = reports.iter().any(|r| r.children.iter().filter(|ch| !ch.species.is_empty()).count() >= 2);
        for r in &reports {
            self.update_counts(r);
        }
        self.stats.deactivated.push(batch.len());
        self.stats.separated_species.push(separated);
        Step::Continue
    }

    /// Drops unknown entries between characters and species that ended up
    /// in different children of a split.
    fn update_counts(&mut self, r: &SplitReport) {
        if r.children.len() < 2 {
            return;
        }
        for (i, ki) in r.children.iter().enumerate() {
            for (j, kj) in r.children.iter().enumerate() {
                if i == j || ki.chars.is_empty() || kj.species.is_empty() {
                    continue;
                }
                self.ops.add((ki.chars.len() * kj.species.len()) as u64);
                for &c in &ki.chars {
                    for &s in &kj.species {
                        match self.a.get(s, c) {
                            CharState::Unknown => self.live[c] -= 1,
                            CharState::One => panic!("solid edge s{s}-c{c} crosses two split pieces"),
                            CharState::Zero => {}
                        }
                    }
                }
            }
        }
    }

    pub fn run(mut self) -> (Solution, SolveStats) {
        while self.step() == Step::Continue {}
        let stats = self.stats();
        (self.result.expect("finished"), stats)
    }
}

pub fn solve(a: &IncompleteMatrix, kind: EngineKind) -> Solution {
    Solver::new(a, kind).run().0
}

pub fn solve_with_stats(a: &IncompleteMatrix, kind: EngineKind) -> (Solution, SolveStats) {
    Solver::new(a, kind).run()
}
