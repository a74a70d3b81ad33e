//! Built-in test graphs: every graph on at most six vertices up to
//! isomorphism, seeded random graphs on seven and eight vertices, named
//! graphs, and seeded products of prime factors.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cc::wl_closure;
use crate::constructions::{enumerate_group, IsoFamily, PermGroup};
use crate::error::Result;
use crate::factor::prime_factorize;
use crate::graph::{cartesian_product, named_graph, random_connected, Graph};

/// Largest order enumerated exhaustively.
pub const EXHAUSTIVE_MAX_N: usize = 6;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub graph: Graph,
}

fn edge_slots(n: usize) -> Vec<(usize, usize)> {
    let mut slots = Vec::new();
    for v in 1..n {
        for u in 0..v {
            slots.push((u, v));
        }
    }
    slots
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn go(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, out);
            p.swap(k, i);
        }
    }
    go(0, &mut p, &mut out);
    out
}

/// Graphs on `n` vertices up to isomorphism, as edge bitmasks that are
/// minimal in their orbit under vertex permutations.
fn orbit_minimal_masks(n: usize) -> Vec<u32> {
    let slots = edge_slots(n);
    let index = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        b * (b - 1) / 2 + a
    };
    let images: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| slots.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    (0u32..1 << slots.len())
        .filter(|&mask| {
            images.iter().all(|img| {
                let mut permuted = 0u32;
                for (bit, &target) in img.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        permuted |= 1 << target;
                    }
                }
                permuted >= mask
            })
        })
        .collect()
}

/// All graphs on `n ≤ 6` vertices up to isomorphism.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= EXHAUSTIVE_MAX_N, "exhaustive enumeration stops at {EXHAUSTIVE_MAX_N}");
    static CACHE: OnceLock<Vec<Vec<Graph>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        (0..=EXHAUSTIVE_MAX_N)
            .map(|n| {
                let slots = edge_slots(n);
                orbit_minimal_masks(n)
                    .into_iter()
                    .map(|mask| {
                        let edges: Vec<(usize, usize)> = slots
                            .iter()
                            .enumerate()
                            .filter(|&(bit, _)| mask >> bit & 1 == 1)
                            .map(|(_, &e)| e)
                            .collect();
                        Graph::from_edges(n, &edges).expect("valid edges")
                    })
                    .collect()
            })
            .collect()
    });
    cache[n].clone()
}

const NAMED: &[&str] = &[
    "complete:2",
    "complete:5",
    "cycle:7",
    "cycle:8",
    "path:7",
    "path:8",
    "star:6",
    "hypercube:3",
    "hamming:2,3",
    "hamming:2,4",
    "shrikhande",
];

/// The corpus restricted to graphs on at most `max_n` vertices: all small
/// graphs, ten seeded random connected graphs each on 7 and 8 vertices, and
/// the named graphs.
pub fn corpus(max_n: usize) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=max_n.min(EXHAUSTIVE_MAX_N) {
        for (i, graph) in all_graphs(n).into_iter().enumerate() {
            out.push(CorpusEntry {
                name: format!("small:{n}#{i}"),
                graph,
            });
        }
    }
    for n in 7..=max_n.min(8) {
        for seed in 0..10 {
            out.push(CorpusEntry {
                name: format!("random_connected:{n},{seed}"),
                graph: random_connected(n, seed),
            });
        }
    }
    for spec in NAMED {
        let graph = named_graph(spec).expect("built-in spec");
        if graph.n() <= max_n {
            out.push(CorpusEntry {
                name: (*spec).to_string(),
                graph,
            });
        }
    }
    out
}

/// A connected prime graph on `2..=max_order` vertices drawn from `rng`.
fn random_prime(rng: &mut ChaCha8Rng, max_order: usize) -> Graph {
    loop {
        let n = rng.random_range(2..=max_order);
        let g = random_connected(n, rng.random());
        if prime_factorize(&g).is_ok_and(|r| r.num_factors == 1) {
            return g;
        }
    }
}

/// A seeded product of two or three connected prime factors on at most
/// `max_order` vertices each, returned with its factors in random order.
pub fn random_prime_product(seed: u64, max_order: usize) -> (Graph, Vec<Graph>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(2..=3);
    let mut factors: Vec<Graph> = (0..k).map(|_| random_prime(&mut rng, max_order)).collect();
    factors.shuffle(&mut rng);
    let (g, _) = cartesian_product(&factors).expect("non-empty factor list");
    (g, factors)
}

/// A seeded family of WL-equivalent configurations for exponentiation
/// tests: relabelled copies of one random graph's closure, each with its
/// colors renamed at random, joined by the matching color bijections.
///
/// The base graph has 3 to 5 vertices and closure rank at most 5; the
/// family has 1 to 4 members and at most 256 product points.
pub fn random_family(seed: u64) -> Result<IsoFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = loop {
        let g = random_connected(rng.random_range(3..=5), rng.random());
        if wl_closure(&g).rank() <= 5 {
            break g;
        }
    };
    let n = g.n();
    let max_degree = (1..=4).take_while(|&d| n.pow(d as u32) <= 256).last().unwrap_or(1);
    let degree = rng.random_range(1..=max_degree);
    let mut ccs = Vec::with_capacity(degree);
    let mut renames: Vec<Vec<u32>> = Vec::with_capacity(degree);
    for _ in 0..degree {
        let mut points: Vec<usize> = (0..n).collect();
        points.shuffle(&mut rng);
        let cc = wl_closure(&g.relabel(&points));
        let mut names: Vec<u32> = (0..cc.rank() as u32).collect();
        names.shuffle(&mut rng);
        ccs.push(cc.rename_colors(&names)?);
        renames.push(names);
    }
    let rank = renames[0].len();
    let row = renames
        .iter()
        .map(|names| {
            let mut map = vec![0u32; rank];
            for c in 0..rank {
                map[renames[0][c] as usize] = names[c];
            }
            map
        })
        .collect();
    IsoFamily::from_first_row(ccs, row, &["E"])
}

/// Subgroup pairs `H ≤ G` of `Sym(degree)`, smaller group first.
pub fn subgroup_pairs(degree: usize) -> Result<Vec<(PermGroup, PermGroup)>> {
    let sym = PermGroup::symmetric(degree)?;
    let mut groups = vec![PermGroup::trivial(degree)?, PermGroup::cyclic(degree)?];
    if degree >= 3 {
        let mut t: Vec<usize> = (0..degree).collect();
        t.swap(0, 1);
        groups.push(enumerate_group(degree, &[t])?);
    }
    let mut pairs = Vec::new();
    for h in &groups {
        pairs.push((h.clone(), sym.clone()));
        for g in &groups {
            if h != g && h.is_subgroup_of(g) {
                pairs.push((h.clone(), g.clone()));
            }
        }
    }
    Ok(pairs)
}

/// Small Cartesian products, each on at most 12 vertices.
pub fn small_products() -> Vec<(String, Vec<Graph>)> {
    [
        "complete:2 complete:2",
        "complete:2 path:3",
        "complete:2 complete:3",
        "complete:2 path:4",
        "complete:2 complete:4",
        "complete:2 star:3",
        "complete:2 cycle:5",
        "complete:2 complete:2 complete:2",
        "complete:3 complete:3",
        "complete:3 path:3",
        "path:3 path:3",
        "complete:2 complete:2 complete:3",
        "complete:3 complete:4",
        "path:3 path:4",
    ]
    .iter()
    .map(|specs| {
        let factors = specs
            .split_whitespace()
            .map(|s| named_graph(s).expect("built-in spec"))
            .collect();
        (specs.replace(' ', " x "), factors)
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_isomorphic;

    #[test]
    fn graph_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=6).map(|n| all_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn small_graphs_pairwise_non_isomorphic() {
        let graphs = all_graphs(5);
        for (i, a) in graphs.iter().enumerate() {
            for b in &graphs[i + 1..] {
                assert!(!graph_isomorphic(a, b).unwrap());
            }
        }
    }

    #[test]
    fn corpus_sizes() {
        assert_eq!(corpus(6).len(), 208 + 2);
        assert!(corpus(8).iter().all(|e| e.graph.n() <= 8));
    }

    #[test]
    fn products_are_deterministic() {
        let (a, fa) = random_prime_product(5, 8);
        let (b, fb) = random_prime_product(5, 8);
        assert_eq!(a, b);
        assert_eq!(fa, fb);
        assert!((2..=3).contains(&fa.len()));
        assert!(fa.iter().all(|f| f.n() >= 2 && f.n() <= 8));
    }

    #[test]
    fn random_families_are_valid() {
        for seed in 0..20 {
            let f = random_family(seed).unwrap();
            assert!((1..=4).contains(&f.degree()));
            assert!(f.ccs()[0].rank() <= 5);
            f.check_cocycle().unwrap();
        }
    }

    #[test]
    fn small_products_stay_small() {
        for (_, factors) in small_products() {
            let (g, _) = cartesian_product(&factors).unwrap();
            assert!(g.n() <= 12);
        }
    }
}
