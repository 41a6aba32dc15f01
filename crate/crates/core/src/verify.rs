//! Independent checks used as oracles: laminarity, Σ-paths, exhaustive
//! completion search, and completion/tree certificates.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, CharState, IncompleteMatrix};
use crate::phylogeny::Phylogeny;

pub const DEFAULT_MAX_UNKNOWNS: usize = 12;

/// Path `s_a - c_x - s_b - c_y - s_c` with `s_a` outside the 1-set of `c_y`
/// and `s_c` outside the 1-set of `c_x`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaWitness {
    pub species: (usize, usize, usize),
    pub chars: (usize, usize),
}

impl fmt::Display for SigmaWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.species;
        let (x, y) = self.chars;
        write!(f, "s{a}-c{x}-s{b}-c{y}-s{c}")
    }
}

/// First pair of columns whose 1-sets overlap without nesting.
pub fn laminar_violation(b: &BinaryMatrix) -> Option<(usize, usize)> {
    let sets: Vec<Vec<usize>> = (0..b.m()).map(|c| b.one_set(c)).collect();
    for x in 0..b.m() {
        for y in x + 1..b.m() {
            let common = sets[x].iter().filter(|&&s| b.get(s, y)).count();
            if common != 0 && common != sets[x].len() && common != sets[y].len() {
                return Some((x, y));
            }
        }
    }
    None
}

pub fn is_laminar(b: &BinaryMatrix) -> bool {
    laminar_violation(b).is_none()
}

/// Searches the graph of 1-entries for a Σ-path directly, without going
/// through column set comparisons.
pub fn detect_sigma(b: &BinaryMatrix) -> Option<SigmaWitness> {
    for mid in 0..b.n() {
        let chars: Vec<usize> = (0..b.m()).filter(|&c| b.get(mid, c)).collect();
        for &x in &chars {
            for &y in &chars {
                if x == y {
                    continue;
                }
                let a = (0..b.n()).find(|&s| b.get(s, x) && !b.get(s, y));
                let c = (0..b.n()).find(|&s| b.get(s, y) && !b.get(s, x));
                if let (Some(a), Some(c)) = (a, c) {
                    return Some(SigmaWitness { species: (a, mid, c), chars: (x, y) });
                }
            }
        }
    }
    None
}

/// Some laminar completion of `a`, found by trying all of them.
pub fn brute_force_completion(a: &IncompleteMatrix, max_unknowns: usize) -> Result<Option<BinaryMatrix>> {
    let unknown: Vec<(usize, usize)> = (0..a.n())
        .flat_map(|s| (0..a.m()).map(move |c| (s, c)))
        .filter(|&(s, c)| a.get(s, c) == CharState::Unknown)
        .collect();
    if unknown.len() > max_unknowns {
        return Err(Error::TooManyUnknowns { found: unknown.len(), limit: max_unknowns });
    }
    let mut b = BinaryMatrix::zeros(a.n(), a.m());
    for s in 0..a.n() {
        for c in 0..a.m() {
            b.set(s, c, a.get(s, c) == CharState::One);
        }
    }
    for mask in 0u64..1 << unknown.len() {
        for (i, &(s, c)) in unknown.iter().enumerate() {
            b.set(s, c, mask >> i & 1 == 1);
        }
        if is_laminar(&b) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

pub fn brute_force_idpp(a: &IncompleteMatrix, max_unknowns: usize) -> Result<bool> {
    Ok(brute_force_completion(a, max_unknowns)?.is_some())
}

/// Whether `b` agrees with `a` on every known entry.
pub fn check_completion(a: &IncompleteMatrix, b: &BinaryMatrix) -> Result<bool> {
    if (a.n(), a.m()) != (b.n(), b.m()) {
        return Err(Error::DimensionMismatch(format!("matrix is {}x{}, completion is {}x{}", a.n(), a.m(), b.n(), b.m())));
    }
    for s in 0..a.n() {
        for c in 0..a.m() {
            let ok = match a.get(s, c) {
                CharState::One => b.get(s, c),
                CharState::Zero => !b.get(s, c),
                CharState::Unknown => true,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeViolation {
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("character c{char} sits above species {leaves:?} but its 1-set is {ones:?}")]
    CharacterMismatch { char: usize, leaves: Vec<usize>, ones: Vec<usize> },
    #[error("vacuous character c{char} has 1-set {ones:?}")]
    VacuousHasOnes { char: usize, ones: Vec<usize> },
}

fn malformed<T>(msg: impl Into<String>) -> std::result::Result<T, TreeViolation> {
    Err(TreeViolation::Malformed(msg.into()))
}

/// Checks the shape of `tree` against the dimensions of `b`: a single root
/// at node 0, consistent parent links, every node reachable, leaves
/// exactly the species, and every character placed exactly once.
fn check_shape(tree: &Phylogeny, b: &BinaryMatrix) -> std::result::Result<(), TreeViolation> {
    let nodes = &tree.nodes;
    if nodes.is_empty() {
        return malformed("no nodes");
    }
    if nodes[0].parent.is_some() {
        return malformed("node 0 has a parent");
    }
    let mut reached = vec![false; nodes.len()];
    let mut stack = vec![0];
    reached[0] = true;
    while let Some(v) = stack.pop() {
        for &c in &nodes[v].children {
            if c >= nodes.len() {
                return malformed(format!("node {v} has missing child {c}"));
            }
            if nodes[c].parent != Some(v) {
                return malformed(format!("node {c} does not point back to its parent {v}"));
            }
            if std::mem::replace(&mut reached[c], true) {
                return malformed(format!("node {c} is reached twice"));
            }
            stack.push(c);
        }
    }
    if let Some(v) = reached.iter().position(|r| !r) {
        return malformed(format!("node {v} is not below the root"));
    }
    let mut species_seen = vec![false; b.n()];
    let mut char_seen = vec![false; b.m()];
    let mut place_char = |c: usize| -> std::result::Result<(), TreeViolation> {
        match char_seen.get_mut(c) {
            None => malformed(format!("character c{c} is out of range")),
            Some(true) => malformed(format!("character c{c} appears twice")),
            Some(seen) => {
                *seen = true;
                Ok(())
            }
        }
    };
    for (v, node) in nodes.iter().enumerate() {
        match node.species {
            Some(s) => {
                if !node.children.is_empty() || !node.chars.is_empty() {
                    return malformed(format!("leaf s{s} has children or characters"));
                }
                match species_seen.get_mut(s) {
                    None => return malformed(format!("species s{s} is out of range")),
                    Some(true) => return malformed(format!("species s{s} appears twice")),
                    Some(seen) => *seen = true,
                }
            }
            None if node.children.is_empty() => return malformed(format!("internal node {v} has no children")),
            None => {
                for &c in &node.chars {
                    place_char(c)?;
                }
            }
        }
    }
    for &c in &tree.vacuous {
        place_char(c)?;
    }
    if let Some(s) = species_seen.iter().position(|x| !x) {
        return malformed(format!("species s{s} is missing"));
    }
    if let Some(c) = char_seen.iter().position(|x| !x) {
        return malformed(format!("character c{c} is missing"));
    }
    Ok(())
}

/// Whether the species below every character's node are exactly its 1-set
/// in `b`, and every vacuous character has an empty 1-set.
pub fn tree_explains(tree: &Phylogeny, b: &BinaryMatrix) -> std::result::Result<(), TreeViolation> {
    check_shape(tree, b)?;
    let leaves = tree.leaf_sets();
    for (v, node) in tree.nodes.iter().enumerate() {
        for &c in &node.chars {
            let ones = b.one_set(c);
            if leaves[v] != ones {
                return Err(TreeViolation::CharacterMismatch { char: c, leaves: leaves[v].clone(), ones });
            }
        }
    }
    for &c in &tree.vacuous {
        let ones = b.one_set(c);
        if !ones.is_empty() {
            return Err(TreeViolation::VacuousHasOnes { char: c, ones });
        }
    }
    Ok(())
}
