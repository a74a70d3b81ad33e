//! Finite simple undirected graphs, binary relations on a point set, and
//! hop distances.

mod edgelist;
mod graph6;
mod iso;
mod named;
mod product;

use std::collections::VecDeque;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

pub use edgelist::{parse_edge_list, write_edge_list};
pub use graph6::{parse_graph6, serialize_graph6};
pub use iso::{graph_isomorphic, graph_isomorphic_with_cap, DEFAULT_ISO_CAP};
pub use named::{named_graph, random_connected, NamedGraph};
pub use product::{cartesian_product, ProductStructure};

/// A simple undirected graph on the vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: BitVec,
    neighbors: Vec<Vec<usize>>,
    edge_count: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            adj: bitvec![0; n * n],
            neighbors: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from undirected edges; duplicates collapse.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter {
                    name: "edge".into(),
                    reason: format!("({u}, {v}) out of range for n = {n}"),
                });
            }
            if u == v {
                return Err(Error::InvalidParameter {
                    name: "edge".into(),
                    reason: format!("self-loop at {u}"),
                });
            }
            g.add_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    /// Adds `{u, v}`; neighbor lists are sorted by `finish`.
    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        if self.adj[u * self.n + v] {
            return;
        }
        self.adj.set(u * self.n + v, true);
        self.adj.set(v * self.n + u, true);
        self.neighbors[u].push(v);
        self.neighbors[v].push(u);
        self.edge_count += 1;
    }

    pub(crate) fn finish(&mut self) {
        for list in &mut self.neighbors {
            list.sort_unstable();
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Unordered edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for u in 0..self.n {
            for &v in &self.neighbors[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// The edge set as a symmetric relation on the vertex set.
    pub fn edge_relation(&self) -> BinaryRelation {
        BinaryRelation {
            n: self.n,
            bits: self.adj.clone(),
        }
    }

    /// The graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "relabel: permutation length");
        let mut g = Self::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g.finish();
        g
    }

    /// Subgraph induced by `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let mut g = Self::empty(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.is_adjacent(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g.finish();
        g
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }
}

/// True iff a single BFS tree spans every vertex. The empty graph on zero
/// vertices counts as connected.
pub fn is_connected(g: &Graph) -> bool {
    if g.n == 0 {
        return true;
    }
    let mut seen = vec![false; g.n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == g.n
}

/// All-pairs hop distances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    /// Marker stored for pairs in different components.
    pub const UNREACHABLE: u32 = u32::MAX;

    pub fn n(&self) -> usize {
        self.n
    }

    /// Raw entry; `UNREACHABLE` for disconnected pairs.
    #[inline]
    pub fn raw(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.n + v]
    }

    pub fn get(&self, u: usize, v: usize) -> Option<u32> {
        match self.raw(u, v) {
            Self::UNREACHABLE => None,
            d => Some(d),
        }
    }

    /// Largest finite distance.
    pub fn diameter(&self) -> u32 {
        self.dist
            .iter()
            .copied()
            .filter(|&d| d != Self::UNREACHABLE)
            .max()
            .unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        !self.dist.contains(&Self::UNREACHABLE)
    }

    /// The distance-`d` relation; `None` selects unreachable pairs.
    pub fn distance_relation(&self, d: Option<u32>) -> BinaryRelation {
        let key = d.unwrap_or(Self::UNREACHABLE);
        let mut r = BinaryRelation::empty(self.n);
        for (i, &x) in self.dist.iter().enumerate() {
            if x == key {
                r.bits.set(i, true);
            }
        }
        r
    }
}

pub fn bfs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut dist = vec![DistanceMatrix::UNREACHABLE; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = 0;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in g.neighbors(u) {
                if row[v] == DistanceMatrix::UNREACHABLE {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceMatrix { n, dist }
}

/// A binary relation on `0..n`, stored as an `n * n` bit matrix.
///
/// `pairs` and `from_pairs` give the sparse view of the same set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    n: usize,
    bits: BitVec,
}

impl std::fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BinaryRelation")
            .field("n", &self.n)
            .field("len", &self.len())
            .finish()
    }
}

impl BinaryRelation {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            bits: bitvec![0; n * n],
        }
    }

    /// The full relation on `0..n`.
    pub fn full(n: usize) -> Self {
        Self {
            n,
            bits: bitvec![1; n * n],
        }
    }

    /// The diagonal on `0..n`.
    pub fn identity(n: usize) -> Self {
        Self::diagonal_of(n, 0..n)
    }

    /// The diagonal of `delta × delta`.
    pub fn diagonal_of(n: usize, delta: impl IntoIterator<Item = usize>) -> Self {
        let mut r = Self::empty(n);
        for a in delta {
            r.insert(a, a);
        }
        r
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    /// Relation whose cells are given by a predicate on flat indices.
    pub fn from_cell_predicate(n: usize, mut keep: impl FnMut(usize) -> bool) -> Self {
        let mut r = Self::empty(n);
        for i in 0..n * n {
            if keep(i) {
                r.bits.set(i, true);
            }
        }
        r
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    /// Membership by flat row-major cell index.
    #[inline]
    pub fn contains_cell(&self, cell: usize) -> bool {
        self.bits[cell]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits.set(a * self.n + b, true);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    /// Flat indices of member cells in increasing order.
    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter_ones()
    }

    /// Member pairs in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        self.bits.iter_ones().map(move |i| (i / n, i % n))
    }

    pub fn transpose(&self) -> Self {
        Self::from_pairs(self.n, self.pairs().map(|(a, b)| (b, a)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs().all(|(a, b)| self.contains(b, a))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::PointCountMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut bits = self.bits.clone();
        bits |= other.bits.as_bitslice();
        Ok(Self { n: self.n, bits })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut bits = self.bits.clone();
        bits &= other.bits.as_bitslice();
        Ok(Self { n: self.n, bits })
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.n == other.n && self.bits.iter_ones().all(|i| other.bits[i])
    }

    /// Points occurring in some pair, in either coordinate.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for (a, b) in self.pairs() {
            seen[a] = true;
            seen[b] = true;
        }
        (0..self.n).filter(|&a| seen[a]).collect()
    }

    /// The neighborhood `αr`.
    pub fn neighborhood(&self, a: usize) -> Vec<usize> {
        (0..self.n).filter(|&b| self.contains(a, b)).collect()
    }

    /// `r_{Δ,Γ} = r ∩ (Δ × Γ)`.
    pub fn restrict(&self, delta: &[usize], gamma: &[usize]) -> Self {
        let mut r = Self::empty(self.n);
        for &a in delta {
            for &b in gamma {
                if self.contains(a, b) {
                    r.insert(a, b);
                }
            }
        }
        r
    }
}

/// The dot product `r · s = {(α, β) : (α, γ) ∈ r, (γ, β) ∈ s for some γ}`.
pub fn dot_product(r: &BinaryRelation, s: &BinaryRelation) -> Result<BinaryRelation> {
    r.check_same(s)?;
    let n = r.n;
    let mut out = BinaryRelation::empty(n);
    for a in 0..n {
        let row = &mut out.bits[a * n..(a + 1) * n];
        for g in 0..n {
            if r.contains(a, g) {
                *row |= &s.bits[g * n..(g + 1) * n];
            }
        }
    }
    Ok(out)
}

/// Reflexive, symmetric, transitive closure over the whole point set.
pub fn transitive_closure(r: &BinaryRelation) -> BinaryRelation {
    let n = r.n;
    let mut uf = UnionFind::new(n);
    for (a, b) in r.pairs() {
        uf.union(a, b);
    }
    let labels = uf.labels();
    BinaryRelation::from_cell_predicate(n, |i| labels[i / n] == labels[i % n])
}
