//! Quivers (directed multigraphs with loops and parallel arrows) and their paths.
//!
//! Paths are stored in *application order*: the first arrow in
//! [`Path::arrows`] is the one applied first. Mathematical notation writes
//! the same path right-to-left, so the path `a2,3 a1,2` is stored as
//! `[a1,2, a2,3]`.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub tail: String,
    pub head: String,
}

impl Arrow {
    pub fn new(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>) -> Self {
        Arrow {
            id: id.into(),
            tail: tail.into(),
            head: head.into(),
        }
    }
}

/// A validated quiver `Q = (Q0, Q1, h, t)`.
///
/// Input ordering of nodes and arrows is preserved and drives every
/// deterministic ordering in the crate (path enumeration, block layout).
#[derive(Clone, Debug)]
pub struct Quiver {
    nodes: Vec<String>,
    arrows: Vec<Arrow>,
    tails: Vec<usize>,
    heads: Vec<usize>,
    node_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    fingerprint: u64,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new<N: Into<String>>(nodes: impl IntoIterator<Item = N>, arrows: Vec<Arrow>) -> Result<Self> {
        let nodes: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateNode(n.clone()));
            }
        }
        let mut arrow_index = HashMap::with_capacity(arrows.len());
        let mut tails = Vec::with_capacity(arrows.len());
        let mut heads = Vec::with_capacity(arrows.len());
        for (i, a) in arrows.iter().enumerate() {
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::DuplicateArrow(a.id.clone()));
            }
            for end in [&a.tail, &a.head] {
                if !node_index.contains_key(end) {
                    return Err(Error::UnknownEndpoint {
                        arrow: a.id.clone(),
                        node: end.clone(),
                    });
                }
            }
            tails.push(node_index[&a.tail]);
            heads.push(node_index[&a.head]);
        }
        let mut h = DefaultHasher::new();
        nodes.hash(&mut h);
        arrows.hash(&mut h);
        Ok(Quiver {
            nodes,
            arrows,
            tails,
            heads,
            node_index,
            arrow_index,
            fingerprint: h.finish(),
        })
    }

    /// The equioriented chain `1 -> 2 -> ... -> n` with arrows `a{i}{i+1}`.
    pub fn chain(n: usize) -> Self {
        let nodes: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        let arrows = (1..n)
            .map(|i| Arrow::new(format!("a{}{}", i, i + 1), i.to_string(), (i + 1).to_string()))
            .collect();
        Quiver::new(nodes, arrows).expect("chain quiver is well formed")
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrow_index.get(id).copied()
    }

    /// Tail node index of arrow `a`.
    pub fn tail(&self, a: usize) -> usize {
        self.tails[a]
    }

    /// Head node index of arrow `a`.
    pub fn head(&self, a: usize) -> usize {
        self.heads[a]
    }

    /// Structural hash; equal quivers share it.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    /// Trivial path `e_i` at node index `i`.
    pub fn trivial(&self, node: usize) -> Path {
        assert!(node < self.nodes.len(), "node index out of range");
        Path {
            quiver: self.fingerprint,
            tail: node,
            head: node,
            arrows: Vec::new(),
        }
    }

    pub fn trivial_at(&self, node: &str) -> Result<Path> {
        let i = self
            .node_index(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))?;
        Ok(self.trivial(i))
    }

    /// Single-arrow path.
    pub fn arrow_path(&self, a: usize) -> Path {
        Path {
            quiver: self.fingerprint,
            tail: self.tails[a],
            head: self.heads[a],
            arrows: vec![a],
        }
    }

    /// Builds a path from arrow ids listed in application order (first
    /// applied first).
    pub fn path<S: AsRef<str>>(&self, ids: &[S]) -> Result<Path> {
        let mut idx = Vec::with_capacity(ids.len());
        for id in ids {
            let id = id.as_ref();
            idx.push(
                self.arrow_index(id)
                    .ok_or_else(|| Error::UnknownArrow(id.to_string()))?,
            );
        }
        self.path_from_indices(idx)
    }

    /// Non-empty path from arrow indices in application order.
    pub fn path_from_indices(&self, arrows: Vec<usize>) -> Result<Path> {
        let (first, last) = match (arrows.first(), arrows.last()) {
            (Some(&f), Some(&l)) => (f, l),
            _ => return Err(Error::Invalid("empty arrow list; use a trivial path".into())),
        };
        for &a in &arrows {
            if a >= self.arrows.len() {
                return Err(Error::UnknownArrow(format!("#{a}")));
            }
        }
        for w in arrows.windows(2) {
            if self.heads[w[0]] != self.tails[w[1]] {
                return Err(Error::NotComposable {
                    earlier: self.arrows[w[0]].id.clone(),
                    later: self.arrows[w[1]].id.clone(),
                });
            }
        }
        Ok(Path {
            quiver: self.fingerprint,
            tail: self.tails[first],
            head: self.heads[last],
            arrows,
        })
    }

    /// Checks that `p` was built on a quiver structurally equal to this one.
    pub fn owns(&self, p: &Path) -> bool {
        p.quiver == self.fingerprint
    }

    /// All paths of length `0..=max_len`, ordered by length, then by the
    /// arrow sequence (arrows compared by their position in the quiver).
    pub fn enumerate_paths(&self, max_len: usize) -> Vec<Path> {
        let mut out: Vec<Path> = (0..self.nodes.len()).map(|i| self.trivial(i)).collect();
        let mut frontier: Vec<Path> = out.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &frontier {
                for a in 0..self.arrows.len() {
                    if self.tails[a] == p.head {
                        let mut arrows = p.arrows.clone();
                        arrows.push(a);
                        next.push(Path {
                            quiver: self.fingerprint,
                            tail: p.tail,
                            head: self.heads[a],
                            arrows,
                        });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    /// True iff the quiver has no directed cycle (loops count as cycles).
    pub fn is_acyclic(&self) -> bool {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        for &h in &self.heads {
            indegree[h] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for a in 0..self.arrows.len() {
                if self.tails[a] == v {
                    let h = self.heads[a];
                    indegree[h] -= 1;
                    if indegree[h] == 0 {
                        stack.push(h);
                    }
                }
            }
        }
        seen == n
    }

    /// If this quiver is an equioriented chain, returns its node indices in
    /// chain order together with the arrow joining position `k` to `k+1`.
    pub fn chain_order(&self) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = self.nodes.len();
        if n == 0 {
            return Err(Error::NotChain("no nodes".into()));
        }
        if self.arrows.len() != n - 1 {
            return Err(Error::NotChain(format!(
                "{} nodes need {} arrows, found {}",
                n,
                n - 1,
                self.arrows.len()
            )));
        }
        let mut out_arrow = vec![None; n];
        let mut has_in = vec![false; n];
        for a in 0..self.arrows.len() {
            let (t, h) = (self.tails[a], self.heads[a]);
            if t == h {
                return Err(Error::NotChain(format!("loop `{}`", self.arrows[a].id)));
            }
            if out_arrow[t].replace(a).is_some() {
                return Err(Error::NotChain(format!("node `{}` has two outgoing arrows", self.nodes[t])));
            }
            if std::mem::replace(&mut has_in[h], true) {
                return Err(Error::NotChain(format!("node `{}` has two incoming arrows", self.nodes[h])));
            }
        }
        let start = (0..n)
            .find(|&i| !has_in[i])
            .ok_or_else(|| Error::NotChain("no source node".into()))?;
        let mut order = vec![start];
        let mut arrows = Vec::with_capacity(n - 1);
        let mut cur = start;
        while let Some(a) = out_arrow[cur] {
            arrows.push(a);
            cur = self.heads[a];
            order.push(cur);
            if order.len() > n {
                return Err(Error::NotChain("cycle".into()));
            }
        }
        if order.len() != n {
            return Err(Error::NotChain("quiver is disconnected".into()));
        }
        Ok((order, arrows))
    }

    /// Arrow ids of `p` in application order.
    pub fn arrow_ids(&self, p: &Path) -> Vec<&str> {
        p.arrows.iter().map(|&a| self.arrows[a].id.as_str()).collect()
    }

    /// Human-readable form in right-to-left notation, e.g. `a23·a12` or `e(3)`.
    pub fn describe(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            format!("e({})", self.nodes[p.tail])
        } else {
            let ids: Vec<&str> = p.arrows.iter().rev().map(|&a| self.arrows[a].id.as_str()).collect();
            ids.join("·")
        }
    }
}

/// A path in a quiver. Trivial paths have no arrows and `tail == head`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    quiver: u64,
    tail: usize,
    head: usize,
    arrows: Vec<usize>,
}

/// Result of concatenating two paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Product {
    Path(Path),
    /// The paths do not compose; the algebra assigns them zero.
    Zero,
}

impl Product {
    pub fn path(self) -> Option<Path> {
        match self {
            Product::Path(p) => Some(p),
            Product::Zero => None,
        }
    }
}

impl Path {
    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn head(&self) -> usize {
        self.head
    }

    /// Number of arrows; trivial paths have length 0 (see `is_trivial`).
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Arrow indices in application order.
    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        self.quiver
    }

    /// `later ∘ earlier`: first traverse `earlier`, then `later`.
    pub fn concat(later: &Path, earlier: &Path) -> Result<Product> {
        if later.quiver != earlier.quiver {
            return Err(Error::QuiverMismatch);
        }
        if later.tail != earlier.head {
            return Ok(Product::Zero);
        }
        let mut arrows = Vec::with_capacity(earlier.len() + later.len());
        arrows.extend_from_slice(&earlier.arrows);
        arrows.extend_from_slice(&later.arrows);
        Ok(Product::Path(Path {
            quiver: later.quiver,
            tail: earlier.tail,
            head: later.head,
            arrows,
        }))
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.tail.cmp(&other.tail))
            .then_with(|| self.quiver.cmp(&other.quiver))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arrows.is_empty() {
            write!(f, "e[{}]", self.tail)
        } else {
            let parts: Vec<String> = self.arrows.iter().rev().map(|a| format!("#{a}")).collect();
            write!(f, "{}", parts.join("·"))
        }
    }
}

/// The five-node quiver with eight arrows used throughout the examples:
/// loops at nodes 2 and 4, and the cycles 1→2→3→4→1 and 1→2→3→5→1.
pub fn example_quiver() -> Quiver {
    let arrows = [
        ("a12", "1", "2"),
        ("a23", "2", "3"),
        ("a22", "2", "2"),
        ("a34", "3", "4"),
        ("a35", "3", "5"),
        ("a44", "4", "4"),
        ("a41", "4", "1"),
        ("a51", "5", "1"),
    ]
    .iter()
    .map(|(id, t, h)| Arrow::new(*id, *t, *h))
    .collect();
    Quiver::new(["1", "2", "3", "4", "5"], arrows).expect("example quiver is well formed")
}
