//! The relations `Θ` and `τ` on the edges of a graph, the product relation
//! `c(X) = ⟨Θ ∪ τ⟩`, and prime factorization with respect to the Cartesian
//! product.

use rayon::prelude::*;
use serde::Serialize;

use crate::cc::{wl_closure, CoherentConfiguration, PartialParabolic};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, cartesian_product, BinaryRelation, DistanceMatrix, Graph};
use crate::kwl::{cylinder, two_extension_with_cap};
use crate::union_find::UnionFind;

/// A relation on the ordered edges of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRelation {
    n: usize,
    /// Both orientations of every edge, sorted.
    edges: Vec<(usize, usize)>,
    /// Sorted pairs of indices into `edges`.
    pairs: Vec<(u32, u32)>,
}

impl EdgeRelation {
    fn new(g: &Graph, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Self {
            n: g.n(),
            edges: ordered_edges(g),
            pairs,
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn edge_index(&self, x: usize, y: usize) -> Option<usize> {
        self.edges.binary_search(&(x, y)).ok()
    }

    pub fn contains(&self, e: (usize, usize), f: (usize, usize)) -> bool {
        match (self.edge_index(e.0, e.1), self.edge_index(f.0, f.1)) {
            (Some(i), Some(j)) => self.pairs.binary_search(&(i as u32, j as u32)).is_ok(),
            _ => false,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.pairs
            .iter()
            .all(|&(i, j)| self.pairs.binary_search(&(j, i)).is_ok())
    }

    /// The relation on the points of `Ω²`, the edge `(x, y)` being the point
    /// `x·n + y`.
    pub fn on_pairs(&self) -> BinaryRelation {
        let n = self.n;
        BinaryRelation::from_pairs(
            n * n,
            self.pairs.iter().map(|&(i, j)| {
                let (x, y) = self.edges[i as usize];
                let (u, v) = self.edges[j as usize];
                (x * n + y, u * n + v)
            }),
        )
    }
}

fn ordered_edges(g: &Graph) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();
    out.sort_unstable();
    out
}

fn connected_distances(g: &Graph, context: &str) -> Result<DistanceMatrix> {
    let d = bfs_distances(g);
    if !d.is_connected() {
        return Err(Error::Disconnected {
            context: context.to_string(),
        });
    }
    Ok(d)
}

#[inline]
fn theta_holds(d: &DistanceMatrix, (x, y): (usize, usize), (u, v): (usize, usize)) -> bool {
    d.raw(x, v) + d.raw(y, u) != d.raw(x, u) + d.raw(y, v)
}

/// `Θ(X)`: edges `(x, y), (x', y')` with
/// `∂(x, y') + ∂(y, x') ≠ ∂(x, x') + ∂(y, y')`.
pub fn theta_relation(g: &Graph) -> Result<EdgeRelation> {
    let d = connected_distances(g, "theta relation")?;
    let edges = ordered_edges(g);
    let pairs: Vec<(u32, u32)> = (0..edges.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let edges = &edges;
            let d = &d;
            (0..edges.len())
                .filter(move |&j| theta_holds(d, edges[i], edges[j]))
                .map(move |j| (i as u32, j as u32))
        })
        .collect();
    Ok(EdgeRelation::new(g, pairs))
}

/// Number of common neighbors of `y` and `z`.
fn common_neighbors(g: &Graph, y: usize, z: usize) -> usize {
    g.neighbors(y).iter().filter(|&&w| g.is_adjacent(w, z)).count()
}

/// `τ(X)` from the definition: `x = x'` and `yE ∩ y'E = {x}`. An edge
/// whose far end has degree one is related to itself.
pub fn tau_relation(g: &Graph) -> Result<EdgeRelation> {
    connected_distances(g, "tau relation")?;
    let edges = ordered_edges(g);
    let mut pairs = Vec::new();
    for x in 0..g.n() {
        for &y in g.neighbors(x) {
            for &z in g.neighbors(x) {
                if common_neighbors(g, y, z) == 1 {
                    let i = edges.binary_search(&(x, y)).expect("edge");
                    let j = edges.binary_search(&(x, z)).expect("edge");
                    pairs.push((i as u32, j as u32));
                }
            }
        }
    }
    Ok(EdgeRelation::new(g, pairs))
}

/// The colors `t` of `WL(X)` with `Σ_{r,s ⊆ E} c_{r,s}^t = 1`, i.e. the
/// pairs with exactly one common neighbor.
pub fn unique_common_neighbor_colors(cc: &CoherentConfiguration) -> Result<Vec<u32>> {
    let edge = cc.tag("E")?;
    let tensor = cc.intersection_numbers()?;
    Ok((0..cc.rank() as u32)
        .filter(|&t| {
            tensor
                .entries_for(t)
                .iter()
                .filter(|(r, s, _)| edge.contains(r) && edge.contains(s))
                .map(|&(_, _, c)| c)
                .sum::<u32>()
                == 1
        })
        .collect())
}

/// `s'` as a relation on `Ω`.
pub fn unique_common_neighbor_relation(g: &Graph) -> Result<BinaryRelation> {
    connected_distances(g, "unique common neighbor relation")?;
    let cc = wl_closure(g);
    Ok(cc.relation_of(&unique_common_neighbor_colors(&cc)?))
}

/// `s(a, b, c, d) = cyl_{s_a}(0,1) ∩ cyl_{s_b}(1,0) ∩ cyl_{s_c}(0,0) ∩ cyl_{s_d}(1,1)`
/// on the points of `Ω²`, where `s_i` is the distance-`i` relation.
pub fn distance_quadruple_relation(g: &Graph, a: u32, b: u32, c: u32, d: u32) -> Result<BinaryRelation> {
    let dist = connected_distances(g, "distance quadruple relation")?;
    let cc = wl_closure(g);
    let mut out = cylinder(&cc, &dist.distance_relation(Some(a)), 0, 1)?;
    for (s, i, j) in [(b, 1, 0), (c, 0, 0), (d, 1, 1)] {
        out = out.intersection(&cylinder(&cc, &dist.distance_relation(Some(s)), i, j)?)?;
    }
    Ok(out)
}

/// `E × E` on the points of `Ω²`.
fn edge_square(g: &Graph) -> BinaryRelation {
    let n = g.n();
    let e = g.edge_relation();
    let big = n * n;
    BinaryRelation::from_cell_predicate(big, |cell| {
        e.contains_cell(cell / big) && e.contains_cell(cell % big)
    })
}

/// `Θ` as the union of `s(a, b, c, d)` over `a + b ≠ c + d`, restricted to
/// `E × E`.
pub fn theta_by_cylinders(g: &Graph) -> Result<BinaryRelation> {
    let dist = connected_distances(g, "theta relation")?;
    let cc = wl_closure(g);
    let n = g.n();
    let diam = dist.diameter();
    let mut cyl: Vec<[BinaryRelation; 4]> = Vec::new();
    for k in 0..=diam {
        let s = dist.distance_relation(Some(k));
        cyl.push([
            cylinder(&cc, &s, 0, 1)?,
            cylinder(&cc, &s, 1, 0)?,
            cylinder(&cc, &s, 0, 0)?,
            cylinder(&cc, &s, 1, 1)?,
        ]);
    }
    let mut out = BinaryRelation::empty(n * n);
    for a in 0..=diam {
        for b in 0..=diam {
            let ab = cyl[a as usize][0].intersection(&cyl[b as usize][1])?;
            if ab.is_empty() {
                continue;
            }
            for c in 0..=diam {
                let abc = ab.intersection(&cyl[c as usize][2])?;
                if abc.is_empty() {
                    continue;
                }
                for d in 0..=diam {
                    if a + b != c + d {
                        out = out.union(&abc.intersection(&cyl[d as usize][3])?)?;
                    }
                }
            }
        }
    }
    out.intersection(&edge_square(g))
}

/// `τ = cyl_{1_Ω}(0,0) ∩ cyl_{s'}(1,1)`, restricted to `E × E`.
pub fn tau_by_cylinders(g: &Graph) -> Result<BinaryRelation> {
    connected_distances(g, "tau relation")?;
    let cc = wl_closure(g);
    let s_prime = cc.relation_of(&unique_common_neighbor_colors(&cc)?);
    let n = g.n();
    cylinder(&cc, &BinaryRelation::identity(n), 0, 0)?
        .intersection(&cylinder(&cc, &s_prime, 1, 1)?)?
        .intersection(&edge_square(g))
}

/// Classes of `c(X)` on the unordered edges `u < v` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductRelation {
    pub edges: Vec<(usize, usize)>,
    /// Class of each unordered edge, numbered by first edge.
    pub edge_class: Vec<u32>,
    /// The classes as a partial parabolic on edge indices.
    pub classes: PartialParabolic,
}

impl ProductRelation {
    pub fn class_count(&self) -> usize {
        self.classes.class_count()
    }

    /// `c(X)` on ordered edges, as a relation on the points of `Ω²`.
    pub fn on_pairs(&self, n: usize) -> BinaryRelation {
        let mut ordered: Vec<(usize, u32)> = Vec::new();
        for (&(u, v), &c) in self.edges.iter().zip(&self.edge_class) {
            ordered.push((u * n + v, c));
            ordered.push((v * n + u, c));
        }
        BinaryRelation::from_pairs(
            n * n,
            ordered.iter().flat_map(|&(p, c)| {
                ordered
                    .iter()
                    .filter(move |&&(_, d)| d == c)
                    .map(move |&(q, _)| (p, q))
            }),
        )
    }
}

/// `c(X) = ⟨Θ ∪ τ⟩` on unordered edges.
///
/// Both `Θ` and the folded `τ` are invariant under reversing either edge,
/// so the closure runs on unordered edges directly.
pub fn product_relation(g: &Graph) -> Result<ProductRelation> {
    let d = connected_distances(g, "product relation")?;
    let edges = g.edges();
    let m = edges.len();
    let theta: Vec<Vec<u32>> = (0..m)
        .into_par_iter()
        .map(|i| {
            (i + 1..m)
                .filter(|&j| theta_holds(&d, edges[i], edges[j]))
                .map(|j| j as u32)
                .collect()
        })
        .collect();
    let mut uf = UnionFind::new(m);
    for (i, js) in theta.iter().enumerate() {
        for &j in js {
            uf.union(i, j as usize);
        }
    }
    let index = |u: usize, v: usize| {
        let key = (u.min(v), u.max(v));
        edges.binary_search(&key).expect("edge")
    };
    for x in 0..g.n() {
        let nb = g.neighbors(x);
        for (k, &y) in nb.iter().enumerate() {
            for &z in &nb[k + 1..] {
                if common_neighbors(g, y, z) == 1 {
                    uf.union(index(x, y), index(x, z));
                }
            }
        }
    }
    let labels = uf.labels();
    let edge_class: Vec<u32> = labels.iter().map(|&l| l as u32).collect();
    let count = edge_class.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut groups = vec![Vec::new(); count];
    for (i, &c) in edge_class.iter().enumerate() {
        groups[c as usize].push(i);
    }
    let classes = PartialParabolic::from_classes(m, groups)?;
    Ok(ProductRelation {
        edges,
        edge_class,
        classes,
    })
}

/// A certified prime factorization.
#[derive(Clone, Debug, Serialize)]
pub struct FactorizationReport {
    pub num_factors: usize,
    /// Unordered edges `u < v` in lexicographic order.
    pub edges: Vec<(usize, usize)>,
    pub edge_class: Vec<u32>,
    /// Layer of factor `i` through vertex 0, sorted.
    pub layers: Vec<Vec<usize>>,
    #[serde(skip)]
    pub factors: Vec<Graph>,
    /// Coordinates of every vertex.
    pub coordinates: Vec<Vec<usize>>,
    pub certified: bool,
}

impl FactorizationReport {
    pub fn factor_orders(&self) -> Vec<usize> {
        self.factors.iter().map(Graph::n).collect()
    }
}

/// Factors a connected graph on at least two vertices.
///
/// The classes of `c(X)` color the edges; factor `i` is the layer through
/// vertex 0 in `(Ω, c_i)`, and coordinate `i` of `u` is the layer vertex
/// lying in the component of `u` in `(Ω, ⋃_{j≠i} c_j)`. The coordinate map
/// is then checked to be an isomorphism onto the product of the factors.
pub fn prime_factorize(g: &Graph) -> Result<FactorizationReport> {
    if g.n() < 2 {
        return Err(Error::TooFewVertices { min: 2, got: g.n() });
    }
    let pr = product_relation(g)?;
    let n = g.n();
    let k = pr.class_count();
    let mut layers = Vec::with_capacity(k);
    let mut factors = Vec::with_capacity(k);
    let mut coordinates = vec![vec![0usize; k]; n];
    for i in 0..k as u32 {
        let mut inside = UnionFind::new(n);
        let mut outside = UnionFind::new(n);
        for (&(u, v), &c) in pr.edges.iter().zip(&pr.edge_class) {
            if c == i {
                inside.union(u, v);
            } else {
                outside.union(u, v);
            }
        }
        let layer: Vec<usize> = (0..n).filter(|&v| inside.same(0, v)).collect();
        let mut position = vec![usize::MAX; n];
        for (idx, &v) in layer.iter().enumerate() {
            let root = outside.find(v);
            if position[root] != usize::MAX {
                return Err(Error::CertificationFailed(format!(
                    "layer {i} meets a complementary component twice"
                )));
            }
            position[root] = idx;
        }
        for (u, coords) in coordinates.iter_mut().enumerate() {
            let p = position[outside.find(u)];
            if p == usize::MAX {
                return Err(Error::CertificationFailed(format!(
                    "vertex {u} has no coordinate in factor {i}"
                )));
            }
            coords[i as usize] = p;
        }
        let edges: Vec<(usize, usize)> = pr
            .edges
            .iter()
            .zip(&pr.edge_class)
            .filter(|&(&(u, v), &c)| c == i && inside.same(0, u) && inside.same(0, v))
            .map(|(&(u, v), _)| {
                (
                    layer.binary_search(&u).expect("layer vertex"),
                    layer.binary_search(&v).expect("layer vertex"),
                )
            })
            .collect();
        factors.push(Graph::from_edges(layer.len(), &edges)?);
        layers.push(layer);
    }
    certify(g, &factors, &coordinates)?;
    Ok(FactorizationReport {
        num_factors: k,
        edges: pr.edges,
        edge_class: pr.edge_class,
        layers,
        factors,
        coordinates,
        certified: true,
    })
}

/// Checks that `coordinates` is an isomorphism from `g` onto the product of
/// `factors`.
fn certify(g: &Graph, factors: &[Graph], coordinates: &[Vec<usize>]) -> Result<()> {
    let (product, ps) = cartesian_product(factors)?;
    if product.n() != g.n() {
        return Err(Error::CertificationFailed(format!(
            "factor orders multiply to {}, graph has {} vertices",
            product.n(),
            g.n()
        )));
    }
    let image: Vec<usize> = coordinates.iter().map(|c| ps.index_of(c)).collect();
    let mut hit = vec![false; g.n()];
    for &p in &image {
        if std::mem::replace(&mut hit[p], true) {
            return Err(Error::CertificationFailed("coordinates are not injective".into()));
        }
    }
    if product.edge_count() != g.edge_count() {
        return Err(Error::CertificationFailed(format!(
            "product has {} edges, graph has {}",
            product.edge_count(),
            g.edge_count()
        )));
    }
    for (u, v) in g.edges() {
        if !product.is_adjacent(image[u], image[v]) {
            return Err(Error::CertificationFailed(format!(
                "edge ({u}, {v}) is not an edge of the product"
            )));
        }
    }
    Ok(())
}

/// Pairs of adjacent vertices with exactly `count` common neighbors: the
/// cells where `A² ∘ A` equals `count`.
pub fn common_neighbor_relation(g: &Graph, count: usize) -> BinaryRelation {
    BinaryRelation::from_pairs(
        g.n(),
        g.edges()
            .into_iter()
            .filter(|&(u, v)| common_neighbors(g, u, v) == count)
            .flat_map(|(u, v)| [(u, v), (v, u)]),
    )
}

/// Outcome of placing `Θ`, `τ` and `c(X)` inside the 2-extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionPlacement {
    pub theta_is_relation: bool,
    pub tau_is_relation: bool,
    pub product_relation_is_partial_parabolic: bool,
    pub theta_matches_cylinders: bool,
    pub tau_matches_cylinders: bool,
}

impl ExtensionPlacement {
    pub fn all_hold(&self) -> bool {
        self.theta_is_relation
            && self.tau_is_relation
            && self.product_relation_is_partial_parabolic
            && self.theta_matches_cylinders
            && self.tau_matches_cylinders
    }
}

/// Checks `Θ`, `τ` and `c(X)` against `X̂ = WL(WL(X) ⊗ WL(X), 1_Δ)`.
pub fn extension_placement(g: &Graph, cap: usize) -> Result<ExtensionPlacement> {
    let theta = theta_relation(g)?.on_pairs();
    let tau = tau_relation(g)?.on_pairs();
    let c = product_relation(g)?.on_pairs(g.n());
    let ext = two_extension_with_cap(&wl_closure(g), cap)?;
    let x = &ext.extended;
    let parabolic = x.is_relation(&c) && PartialParabolic::from_relation(&c).is_ok();
    Ok(ExtensionPlacement {
        theta_is_relation: x.is_relation(&theta),
        tau_is_relation: x.is_relation(&tau),
        product_relation_is_partial_parabolic: parabolic,
        theta_matches_cylinders: theta == theta_by_cylinders(g)?,
        tau_matches_cylinders: tau == tau_by_cylinders(g)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_isomorphic, named_graph, parse_edge_list};

    fn g(spec: &str) -> Graph {
        named_graph(spec).unwrap()
    }

    #[test]
    fn theta_on_square() {
        // C_4 = 0-1-2-3-0: edges (0,1) and (3,2) are opposite
        let c4 = g("cycle:4");
        let t = theta_relation(&c4).unwrap();
        assert!(t.contains((0, 1), (3, 2)));
        assert!(t.contains((0, 1), (2, 3)));
        assert!(t.contains((0, 1), (0, 1)));
        assert!(!t.contains((0, 1), (1, 2)));
        assert!(t.is_symmetric());
    }

    #[test]
    fn theta_on_cube_follows_directions() {
        let q3 = g("hypercube:3");
        let t = theta_relation(&q3).unwrap();
        for &(i, j) in t.pairs() {
            let (x, y) = t.edges()[i as usize];
            let (u, v) = t.edges()[j as usize];
            assert_eq!(x ^ y, u ^ v, "edges ({x},{y}) ({u},{v})");
        }
        // every edge relates to all 8 orientations of its direction class
        assert_eq!(t.len(), 24 * 8);
    }

    #[test]
    fn tau_examples() {
        let star = g("star:3");
        let t = tau_relation(&star).unwrap();
        assert!(t.contains((0, 1), (0, 2)));
        assert!(t.contains((0, 3), (0, 1)));
        let c5 = g("cycle:5");
        let t = tau_relation(&c5).unwrap();
        assert!(t.contains((0, 1), (0, 4)));
        assert!(!t.contains((0, 1), (1, 2)));
        let c4 = g("cycle:4");
        assert!(!tau_relation(&c4).unwrap().contains((0, 1), (0, 3)));
    }

    #[test]
    fn cylinder_forms_agree() {
        for spec in ["cycle:6", "cycle:5", "star:3", "hypercube:3", "path:4", "hamming:2,3"] {
            let x = g(spec);
            assert_eq!(theta_by_cylinders(&x).unwrap(), theta_relation(&x).unwrap().on_pairs(), "{spec}");
            assert_eq!(tau_by_cylinders(&x).unwrap(), tau_relation(&x).unwrap().on_pairs(), "{spec}");
        }
    }

    #[test]
    fn s_prime_matches_direct_count() {
        for spec in ["cycle:5", "star:3", "hamming:2,3", "path:5"] {
            let x = g(spec);
            let r = unique_common_neighbor_relation(&x).unwrap();
            for a in 0..x.n() {
                for b in 0..x.n() {
                    assert_eq!(r.contains(a, b), common_neighbors(&x, a, b) == 1);
                }
            }
        }
    }

    #[test]
    fn quadruple_relation_basics() {
        let x = g("path:4");
        let n = 4;
        let s = distance_quadruple_relation(&x, 1, 1, 0, 0).unwrap();
        let expected = BinaryRelation::from_pairs(
            n * n,
            x.edges()
                .into_iter()
                .flat_map(|(u, v)| [(u, v), (v, u)])
                .map(|(u, v)| (u * n + v, u * n + v)),
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn product_relation_counts() {
        let h = product_relation(&g("hamming:2,4")).unwrap();
        assert_eq!(h.class_count(), 2);
        assert!(h.classes.classes().iter().all(|c| c.len() == 24));
        assert_eq!(product_relation(&g("shrikhande")).unwrap().class_count(), 1);
        assert_eq!(product_relation(&g("path:3")).unwrap().class_count(), 1);
    }

    #[test]
    fn factorizations() {
        let q3 = prime_factorize(&g("hypercube:3")).unwrap();
        assert_eq!(q3.num_factors, 3);
        assert!(q3.factors.iter().all(|f| *f == g("complete:2")));
        let h = prime_factorize(&g("hamming:2,4")).unwrap();
        assert_eq!(h.num_factors, 2);
        assert!(h.certified);
        for f in &h.factors {
            assert!(graph_isomorphic(f, &g("complete:4")).unwrap());
        }
        let s = prime_factorize(&g("shrikhande")).unwrap();
        assert_eq!(s.num_factors, 1);
    }

    #[test]
    fn mixed_product_round_trip() {
        let parts = [g("cycle:5"), g("path:3"), g("complete:2")];
        let (x, _) = cartesian_product(&parts).unwrap();
        let report = prime_factorize(&x).unwrap();
        assert_eq!(report.num_factors, 3);
        let mut unmatched: Vec<&Graph> = parts.iter().collect();
        for f in &report.factors {
            let pos = unmatched
                .iter()
                .position(|p| graph_isomorphic(p, f).unwrap())
                .expect("factor matches an input");
            unmatched.remove(pos);
        }
        assert!(unmatched.is_empty());
    }

    #[test]
    fn disconnected_and_tiny_rejected() {
        let x = parse_edge_list("n 4\n0 1\n2 3").unwrap();
        assert!(matches!(prime_factorize(&x), Err(Error::Disconnected { .. })));
        assert!(matches!(theta_relation(&x), Err(Error::Disconnected { .. })));
        assert!(matches!(
            prime_factorize(&g("complete:1")),
            Err(Error::TooFewVertices { .. })
        ));
    }

    #[test]
    fn wielandt_relation_on_complete_products() {
        for n1 in 3..=6 {
            for n2 in n1 + 1..=6 {
                let (x, ps) = cartesian_product(&[g(&format!("complete:{n1}")), g(&format!("complete:{n2}"))]).unwrap();
                assert_eq!(common_neighbor_relation(&x, n1 - 2), ps.factor_relation(0));
                assert_eq!(common_neighbor_relation(&x, n2 - 2), ps.factor_relation(1));
            }
        }
    }

    #[test]
    fn placement_in_extension() {
        let k2 = g("complete:2");
        let (x, _) = cartesian_product(&[k2.clone(), g("path:3")]).unwrap();
        let p = extension_placement(&x, 12).unwrap();
        assert!(p.all_hold(), "{p:?}");
        let p = extension_placement(&g("cycle:6"), 12).unwrap();
        assert!(p.all_hold(), "{p:?}");
    }
}
