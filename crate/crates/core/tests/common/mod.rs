#![allow(dead_code)]

use idpp::gen::SplitMix64;
use idpp::graph::{BipartiteGraph, Partition, VertexId};
use idpp::matrix::{CharState, IncompleteMatrix};

/// Components of the solid subgraph on all species and the `alive`
/// characters, by union-find over the edge list.
pub fn uf_partition(g: &BipartiteGraph, alive: &[bool]) -> Partition {
    let n = g.n_species();
    let total = n + g.n_chars();
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (s, c) in g.solid_edges() {
        if alive[c] {
            let (a, b) = (find(&mut parent, s), find(&mut parent, n + c));
            parent[a] = b;
        }
    }
    let mut sets: Vec<Vec<VertexId>> = vec![Vec::new(); total];
    for v in 0..total {
        if v >= n && !alive[v - n] {
            continue;
        }
        let r = find(&mut parent, v);
        sets[r].push(VertexId::from_flat(v, n));
    }
    Partition::from_sets(sets)
}

/// Small matrix with at most `max_unknowns` unknown cells. The style
/// alternates between planted-looking nested columns and uniform noise.
pub fn small_matrix(rng: &mut SplitMix64, max_n: usize, max_m: usize, max_unknowns: usize) -> IncompleteMatrix {
    let n = 1 + rng.below(max_n);
    let m = 1 + rng.below(max_m);
    let p_unknown = rng.next_f64() * 0.6;
    let p_one = 0.2 + rng.next_f64() * 0.6;
    let mut a = IncompleteMatrix::filled(n, m, CharState::Zero).unwrap();
    let mut unknowns = 0;
    for s in 0..n {
        for c in 0..m {
            let st = if unknowns < max_unknowns && rng.bernoulli(p_unknown) {
                unknowns += 1;
                CharState::Unknown
            } else if rng.bernoulli(p_one) {
                CharState::One
            } else {
                CharState::Zero
            };
            a.set(s, c, st);
        }
    }
    a
}
