//! Rooted trees whose internal nodes carry characters and whose leaves are
//! species, plus their single-line Newick form.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhyloNode {
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Characters gained on the edge into this node, ascending.
    pub chars: Vec<usize>,
    /// Set on leaves only.
    pub species: Option<usize>,
}

impl PhyloNode {
    fn internal(parent: Option<usize>, chars: Vec<usize>) -> Self {
        Self { parent, children: Vec::new(), chars, species: None }
    }

    pub fn is_leaf(&self) -> bool {
        self.species.is_some()
    }
}

/// A directed phylogeny. Node 0 is the root. Characters whose 1-set is
/// empty live in `vacuous` instead of on a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phylogeny {
    pub nodes: Vec<PhyloNode>,
    pub vacuous: Vec<usize>,
}

/// One step of a solver run: the species of a component and the characters
/// deactivated there in that round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEvent {
    pub species: Vec<usize>,
    pub chars: Vec<usize>,
}

impl Phylogeny {
    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, i: usize) -> &PhyloNode {
        &self.nodes[i]
    }

    /// Number of species leaves.
    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Sorted species below every node, indexed by node.
    pub fn leaf_sets(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let Some(s) = node.species else { continue };
            let mut cur = Some(i);
            while let Some(v) = cur {
                sets[v].push(s);
                cur = self.nodes[v].parent;
            }
        }
        for set in &mut sets {
            set.sort_unstable();
        }
        sets
    }

    /// Orders children by their smallest leaf and renumbers nodes in preorder.
    pub fn canonicalize(&mut self) {
        let len = self.nodes.len();
        if len == 0 {
            return;
        }
        let order = self.preorder_from(self.root_index());
        let mut min_leaf = vec![usize::MAX; len];
        for &v in order.iter().rev() {
            if let Some(s) = self.nodes[v].species {
                min_leaf[v] = s;
            }
            if let Some(p) = self.nodes[v].parent {
                min_leaf[p] = min_leaf[p].min(min_leaf[v]);
            }
        }
        for node in &mut self.nodes {
            node.children.sort_by_key(|&c| (min_leaf[c], c));
            node.chars.sort_unstable();
        }
        let order = self.preorder_from(self.root_index());
        let mut new_id = vec![usize::MAX; len];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let mut nodes = Vec::with_capacity(order.len());
        for &v in &order {
            let old = &self.nodes[v];
            nodes.push(PhyloNode {
                parent: old.parent.map(|p| new_id[p]),
                children: old.children.iter().map(|&c| new_id[c]).collect(),
                chars: old.chars.clone(),
                species: old.species,
            });
        }
        self.nodes = nodes;
        self.vacuous.sort_unstable();
    }

    fn root_index(&self) -> usize {
        self.nodes.iter().position(|n| n.parent.is_none()).unwrap_or(0)
    }

    fn preorder_from(&self, root: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        order
    }

    /// Newick string of the tree, `;`-terminated, without the vacuous line.
    pub fn newick(&self) -> String {
        let mut out = String::new();
        if !self.nodes.is_empty() {
            self.write_node(0, &mut out);
        }
        out.push(';');
        out
    }

    fn write_node(&self, v: usize, out: &mut String) {
        let node = &self.nodes[v];
        if let Some(s) = node.species {
            out.push_str(&format!("s{s}"));
            return;
        }
        out.push('(');
        for (i, &c) in node.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.write_node(c, out);
        }
        out.push(')');
        let label: Vec<String> = node.chars.iter().map(|c| format!("c{c}")).collect();
        out.push_str(&label.join("+"));
    }

    /// Parses the output of [`fmt::Display`]: a Newick line and an optional
    /// `vacuous:` line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let tree_line = lines.next().ok_or_else(|| Error::MalformedTree("empty input".into()))?;
        let mut p = NewickParser { s: tree_line.as_bytes(), pos: 0, nodes: Vec::new() };
        p.node(None)?;
        p.expect(b';')?;
        if p.pos != p.s.len() {
            return Err(Error::MalformedTree(format!("trailing input at column {}", p.pos + 1)));
        }
        let mut vacuous = Vec::new();
        if let Some(line) = lines.next() {
            let rest = line
                .strip_prefix("vacuous: ")
                .ok_or_else(|| Error::MalformedTree(format!("unexpected line {line:?}")))?;
            for name in rest.split(',') {
                vacuous.push(parse_index(name, 'c')?);
            }
        }
        if let Some(line) = lines.next() {
            return Err(Error::MalformedTree(format!("unexpected line {line:?}")));
        }
        Ok(Phylogeny { nodes: p.nodes, vacuous })
    }
}

impl fmt::Display for Phylogeny {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.newick())?;
        if !self.vacuous.is_empty() {
            let names: Vec<String> = self.vacuous.iter().map(|c| format!("c{c}")).collect();
            writeln!(f, "vacuous: {}", names.join(","))?;
        }
        Ok(())
    }
}

fn parse_index(name: &str, prefix: char) -> Result<usize> {
    name.strip_prefix(prefix)
        .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::MalformedTree(format!("bad name {name:?}, expected {prefix}<index>")))
}

struct NewickParser<'a> {
    s: &'a [u8],
    pos: usize,
    nodes: Vec<PhyloNode>,
}

impl NewickParser<'_> {
    fn expect(&mut self, b: u8) -> Result<()> {
        if self.s.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::MalformedTree(format!("expected {:?} at column {}", b as char, self.pos + 1)))
        }
    }

    fn label(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.s.len() && !matches!(self.s[self.pos], b'(' | b')' | b',' | b';') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("")
    }

    fn node(&mut self, parent: Option<usize>) -> Result<usize> {
        let id = self.nodes.len();
        self.nodes.push(PhyloNode::internal(parent, Vec::new()));
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        if self.s.get(self.pos) == Some(&b'(') {
            self.pos += 1;
            loop {
                self.node(Some(id))?;
                match self.s.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(Error::MalformedTree(format!("expected ',' or ')' at column {}", self.pos + 1))),
                }
            }
            let label = self.label().to_string();
            if !label.is_empty() {
                self.nodes[id].chars = label.split('+').map(|n| parse_index(n, 'c')).collect::<Result<_>>()?;
            }
        } else {
            let label = self.label().to_string();
            self.nodes[id].species = Some(parse_index(&label, 's')?);
        }
        Ok(id)
    }
}

/// Tree of a Yes run. Each event becomes a node under the node of the
/// component its species came from; species-free events contribute vacuous
/// characters; every species hangs below the last node that contained it.
pub fn build_tree(events: &[TreeEvent], n: usize) -> Phylogeny {
    let mut nodes = vec![PhyloNode::internal(None, Vec::new())];
    let mut species_node = vec![0usize; n];
    let mut vacuous = Vec::new();
    for e in events {
        let Some(&first) = e.species.first() else {
            vacuous.extend_from_slice(&e.chars);
            continue;
        };
        let parent = species_node[first];
        let id = nodes.len();
        nodes.push(PhyloNode::internal(Some(parent), e.chars.clone()));
        nodes[parent].children.push(id);
        for &s in &e.species {
            species_node[s] = id;
        }
    }
    for (s, &parent) in species_node.iter().enumerate() {
        let id = nodes.len();
        nodes.push(PhyloNode { parent: Some(parent), children: Vec::new(), chars: Vec::new(), species: Some(s) });
        nodes[parent].children.push(id);
    }
    let mut tree = Phylogeny { nodes, vacuous };
    tree.canonicalize();
    tree
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(species: &[usize], chars: &[usize]) -> TreeEvent {
        TreeEvent { species: species.to_vec(), chars: chars.to_vec() }
    }

    #[test]
    fn nested_instance_newick() {
        let t = build_tree(&[ev(&[0, 1, 2], &[0]), ev(&[2], &[2]), ev(&[0, 1], &[1])], 3);
        assert_eq!(t.newick(), "(((s0,s1)c1,(s2)c2)c0);");
        assert_eq!(t.leaf_sets()[1], vec![0, 1, 2]);
        assert_eq!(Phylogeny::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn single_species_single_character() {
        let t = build_tree(&[ev(&[0], &[0])], 1);
        assert_eq!(t.newick(), "((s0)c0);");
        assert_eq!(t.nodes.len(), 3);
    }

    #[test]
    fn vacuous_characters_and_star() {
        let t = build_tree(&[ev(&[], &[1]), ev(&[], &[0])], 3);
        assert_eq!(t.to_string(), "(s0,s1,s2);\nvacuous: c0,c1\n");
        assert_eq!(Phylogeny::parse(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "(s0,s1)", "(s0,x1);", "(s0,s1)c;", "(s0,(s1);", "(s0);\nfoo", "(s0);;"] {
            assert!(Phylogeny::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn parse_then_canonicalize_orders_children() {
        let mut t = Phylogeny::parse("((s3,s2)c1+c0,s1,s0);").unwrap();
        t.canonicalize();
        assert_eq!(t.newick(), "(s0,s1,(s2,s3)c0+c1);");
    }
}
