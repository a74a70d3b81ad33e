//! Weisfeiler-Leman refinement of `Ω^k`, projections, `WL_m`-equivalence
//! and closedness, and the 2-extension with its 2-closure.

mod extension;

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::cc::{same_partition, wl_closure, CoherentConfiguration};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refine::SignatureTable;

pub use extension::{
    cylinder, is_two_closed, is_two_closed_with_cap, two_closure, two_closure_with_cap, two_extension,
    two_extension_with_cap, TwoExtension, DEFAULT_EXTENSION_CAP,
};

/// Default limit on `n^k`.
pub const DEFAULT_TUPLE_BUDGET: u128 = 100_000_000;

/// Rank and sorted class sizes after one round.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TraceRound {
    pub rank: usize,
    pub frequencies: Vec<u64>,
}

/// Distinct signatures of one round with multiplicities, in name order.
type RoundTable = Vec<(Box<[u32]>, u64)>;

/// The stable canonical coloring of `Ω^k`; tuples are indexed row-major.
#[derive(Clone, Debug)]
pub struct KTupleColoring {
    n: usize,
    k: usize,
    colors: Vec<u32>,
    rank: usize,
    trace: Vec<TraceRound>,
    tables: Option<Vec<RoundTable>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct KwlExport {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub trace: Vec<TraceRound>,
}

impl KTupleColoring {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// The color of a tuple given by its coordinates.
    pub fn color_of(&self, tuple: &[usize]) -> u32 {
        self.colors[tuple.iter().fold(0, |acc, &x| acc * self.n + x)]
    }

    /// Per-round `(rank, sorted class sizes)`, starting with the initial
    /// coloring and ending with the first round that adds no color.
    pub fn trace(&self) -> &[TraceRound] {
        &self.trace
    }

    pub fn export(&self) -> KwlExport {
        KwlExport {
            n: self.n,
            k: self.k,
            rank: self.rank,
            trace: self.trace.clone(),
        }
    }

    /// Writes the color array as little-endian 32-bit ids.
    pub fn write_colors(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut bytes = Vec::with_capacity(self.colors.len() * 4);
        for &c in &self.colors {
            bytes.extend_from_slice(&c.to_le_bytes());
        }
        out.write_all(&bytes)
    }
}

fn trace_of(colors: &[u32], rank: usize) -> TraceRound {
    let mut freq = vec![0u64; rank];
    for &c in colors {
        freq[c as usize] += 1;
    }
    freq.sort_unstable();
    TraceRound {
        rank,
        frequencies: freq,
    }
}

fn tuple_count(n: usize, k: usize) -> u128 {
    (n as u128).pow(k as u32)
}

fn check_dimension(k: usize) -> Result<()> {
    if (2..=6).contains(&k) {
        Ok(())
    } else {
        Err(Error::BadDimension(k))
    }
}

fn check_budget(n: usize, k: usize, budget: u128) -> Result<()> {
    let required = tuple_count(n, k);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

const CHUNK: usize = 2048;

/// Signatures of tuples `lo..hi`, flattened with end offsets.
fn chunk_signatures(
    n: usize,
    k: usize,
    pows: &[usize],
    colors: &[u32],
    lo: usize,
    hi: usize,
) -> (Vec<u32>, Vec<usize>) {
    let mut out = Vec::new();
    let mut offsets = Vec::with_capacity(hi - lo);
    let mut vecs = vec![0u32; n * k];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut coords = vec![0usize; k];
    for x in lo..hi {
        for i in 0..k {
            coords[i] = (x / pows[i]) % n;
        }
        for g in 0..n {
            for i in 0..k {
                let y = x - coords[i] * pows[i] + g * pows[i];
                vecs[g * k + i] = colors[y];
            }
        }
        order.clear();
        order.extend(0..n);
        order.sort_unstable_by(|&a, &b| vecs[a * k..(a + 1) * k].cmp(&vecs[b * k..(b + 1) * k]));
        out.push(colors[x]);
        let mut i = 0;
        while i < n {
            let head = &vecs[order[i] * k..(order[i] + 1) * k];
            let mut j = i + 1;
            while j < n && vecs[order[j] * k..(order[j] + 1) * k] == *head {
                j += 1;
            }
            out.extend_from_slice(head);
            out.push((j - i) as u32);
            i = j;
        }
        offsets.push(out.len());
    }
    (out, offsets)
}

/// One refinement round over all tuples.
fn tuple_round(n: usize, k: usize, colors: &[u32], keep: bool) -> (Vec<u32>, usize, Option<RoundTable>) {
    let total = colors.len();
    let pows: Vec<usize> = (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect();
    let mut table = SignatureTable::new();
    let mut prov = Vec::with_capacity(total);
    let batch = CHUNK * (rayon::current_num_threads() * 2).max(1);
    let mut start = 0;
    while start < total {
        let end = (start + batch).min(total);
        let chunks: Vec<(Vec<u32>, Vec<usize>)> = (start..end)
            .step_by(CHUNK)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|lo| chunk_signatures(n, k, &pows, colors, lo, (lo + CHUNK).min(end)))
            .collect();
        for (out, offsets) in chunks {
            let mut s = 0;
            for e in offsets {
                prov.push(table.intern(&out[s..e]));
                s = e;
            }
        }
        start = end;
    }
    let rank = table.len();
    let canon = table.canonicalize();
    let next = prov.into_iter().map(|p| canon.remap[p as usize]).collect();
    (next, rank, keep.then_some(canon.table))
}

fn initial_coloring(base: &CoherentConfiguration, k: usize, keep: bool) -> (Vec<u32>, usize, Option<RoundTable>) {
    let n = base.n();
    let total = n.pow(k as u32);
    let mut table = SignatureTable::new();
    let mut prov = Vec::with_capacity(total);
    let mut key = Vec::with_capacity(k + k * k);
    let mut coords = vec![0usize; k];
    for x in 0..total {
        let mut rest = x;
        for i in (0..k).rev() {
            coords[i] = rest % n;
            rest /= n;
        }
        key.clear();
        for i in 0..k {
            key.push((0..k).position(|j| coords[j] == coords[i]).expect("i itself") as u32);
        }
        for i in 0..k {
            for j in 0..k {
                key.push(base.color(coords[i], coords[j]));
            }
        }
        prov.push(table.intern(&key));
    }
    let rank = table.len();
    let canon = table.canonicalize();
    let colors = prov.into_iter().map(|p| canon.remap[p as usize]).collect();
    (colors, rank, keep.then_some(canon.table))
}

fn refine_tuples(base: &CoherentConfiguration, k: usize, keep: bool) -> KTupleColoring {
    let n = base.n();
    let (mut colors, mut rank, first) = initial_coloring(base, k, keep);
    let mut trace = vec![trace_of(&colors, rank)];
    let mut tables = first.map(|t| vec![t]);
    loop {
        let (next, next_rank, table) = tuple_round(n, k, &colors, keep);
        if let (Some(all), Some(t)) = (tables.as_mut(), table) {
            all.push(t);
        }
        if next_rank == rank {
            break;
        }
        colors = next;
        rank = next_rank;
        trace.push(trace_of(&colors, rank));
    }
    KTupleColoring {
        n,
        k,
        colors,
        rank,
        trace,
        tables,
    }
}

/// `WL_k(X)`, initialized from the pair colors of `WL(X)`.
pub fn k_wl(g: &Graph, k: usize) -> Result<KTupleColoring> {
    k_wl_with_budget(g, k, DEFAULT_TUPLE_BUDGET)
}

pub fn k_wl_with_budget(g: &Graph, k: usize, budget: u128) -> Result<KTupleColoring> {
    check_dimension(k)?;
    check_budget(g.n(), k, budget)?;
    Ok(refine_tuples(&wl_closure(g), k, false))
}

/// `WL_k` of a coherent configuration given directly.
pub fn k_wl_of(cc: &CoherentConfiguration, k: usize, budget: u128) -> Result<KTupleColoring> {
    check_dimension(k)?;
    check_budget(cc.n(), k, budget)?;
    Ok(refine_tuples(cc, k, false))
}

fn check_index_set(kc: &KTupleColoring, positions: &[usize]) -> Result<()> {
    let increasing = positions.windows(2).all(|w| w[0] < w[1]);
    if positions.is_empty() || !increasing || positions.iter().any(|&p| p >= kc.k) {
        return Err(Error::BadIndexSet(positions.to_vec()));
    }
    Ok(())
}

/// A coloring of `Ω^{|K|}` viewed as a partition; ids need not be
/// contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectedColoring {
    pub n: usize,
    pub arity: usize,
    pub colors: Vec<u32>,
}

/// `pr_K` by padded tuples: `y` is placed on the positions `K` (0-based,
/// increasing) and every other position repeats the last coordinate of `y`.
pub fn project(kc: &KTupleColoring, positions: &[usize]) -> Result<ProjectedColoring> {
    check_index_set(kc, positions)?;
    let (n, k, m) = (kc.n, kc.k, positions.len());
    let total = n.pow(m as u32);
    let mut colors = Vec::with_capacity(total);
    let mut y = vec![0usize; m];
    let mut x = vec![0usize; k];
    for idx in 0..total {
        let mut rest = idx;
        for j in (0..m).rev() {
            y[j] = rest % n;
            rest /= n;
        }
        x.fill(y[m - 1]);
        for (j, &p) in positions.iter().enumerate() {
            x[p] = y[j];
        }
        colors.push(kc.color_of(&x));
    }
    Ok(ProjectedColoring {
        n,
        arity: m,
        colors,
    })
}

/// `pr_K` by class images: every class `Λ` is projected and the images are
/// required to form a partition. Labels are the smallest color whose image
/// is the block.
pub fn project_by_class_images(kc: &KTupleColoring, positions: &[usize]) -> Result<ProjectedColoring> {
    check_index_set(kc, positions)?;
    let (n, k, m) = (kc.n, kc.k, positions.len());
    let total = n.pow(m as u32);
    let mut images: Vec<Vec<usize>> = vec![Vec::new(); kc.rank];
    let mut x = vec![0usize; k];
    for (idx, &c) in kc.colors.iter().enumerate() {
        let mut rest = idx;
        for i in (0..k).rev() {
            x[i] = rest % n;
            rest /= n;
        }
        let y = positions.iter().fold(0, |acc, &p| acc * n + x[p]);
        images[c as usize].push(y);
    }
    let mut label = vec![u32::MAX; total];
    for (c, img) in images.iter_mut().enumerate() {
        img.sort_unstable();
        img.dedup();
        let first = label[img[0]];
        for &y in img.iter() {
            if label[y] != first {
                return Err(Error::MalformedColoring(format!(
                    "image of class {c} overlaps another image without equality"
                )));
            }
        }
        if first == u32::MAX {
            for &y in img.iter() {
                label[y] = c as u32;
            }
        }
    }
    // an image that was labelled earlier must coincide with the current one
    let mut size = std::collections::HashMap::new();
    for &l in &label {
        *size.entry(l).or_insert(0usize) += 1;
    }
    for (c, img) in images.iter().enumerate() {
        if size[&label[img[0]]] != img.len() {
            return Err(Error::MalformedColoring(format!(
                "image of class {c} is a proper part of a block"
            )));
        }
    }
    Ok(ProjectedColoring {
        n,
        arity: m,
        colors: label,
    })
}

/// `WL(X) = pr_2 WL_m(X)`.
pub fn wl_m_closed(g: &Graph, m: usize, budget: u128) -> Result<bool> {
    let kc = k_wl_with_budget(g, m, budget)?;
    let proj = project(&kc, &[0, 1])?;
    Ok(same_partition(&proj.colors, wl_closure(g).colors()))
}

/// `WL_m`-equivalence by joint canonical naming: the two runs must produce
/// the same signature table, with multiplicities, in every round, and the
/// colors of tuples whose first two coordinates are edges must agree.
pub fn wl_m_equivalent(g1: &Graph, g2: &Graph, m: usize, budget: u128) -> Result<bool> {
    check_dimension(m)?;
    check_budget(g1.n(), m, budget)?;
    check_budget(g2.n(), m, budget)?;
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let (c1, c2) = (wl_closure(g1), wl_closure(g2));
    if crate::cc::canonical_signature(&c1)? != crate::cc::canonical_signature(&c2)? {
        return Ok(false);
    }
    let r1 = refine_tuples(&c1, m, true);
    let r2 = refine_tuples(&c2, m, true);
    if r1.tables != r2.tables || r1.trace != r2.trace {
        return Ok(false);
    }
    Ok(edge_colors(&r1, g1) == edge_colors(&r2, g2))
}

fn edge_colors(kc: &KTupleColoring, g: &Graph) -> Vec<u32> {
    let n = kc.n;
    let stride = n.pow((kc.k - 2) as u32);
    let mut out: Vec<u32> = (0..kc.colors.len())
        .filter(|&x| {
            let head = x / stride;
            g.is_adjacent(head / n, head % n)
        })
        .map(|x| kc.colors[x])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::{algebraically_isomorphic, is_coarsening};
    use crate::graph::{named_graph, random_connected};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(spec: &str) -> Graph {
        named_graph(spec).unwrap()
    }

    /// Equality/adjacency types of k-tuples in a complete graph: set
    /// partitions of k positions (adjacency is forced by equality).
    fn bell(k: usize) -> usize {
        let mut row = vec![1usize];
        for _ in 0..k {
            let mut next = vec![*row.last().unwrap()];
            for &x in &row {
                let v = next.last().unwrap() + x;
                next.push(v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn complete_graph_atomic_types() {
        for k in 2..=4 {
            let kc = k_wl(&g("complete:6"), k).unwrap();
            assert_eq!(kc.rank(), bell(k), "k = {k}");
            assert_eq!(kc.trace().len(), 1);
        }
    }

    #[test]
    fn shrikhande_hamming_traces() {
        let s = g("shrikhande");
        let h = g("hamming:2,4");
        let s2 = k_wl(&s, 2).unwrap();
        let h2 = k_wl(&h, 2).unwrap();
        assert_eq!(s2.trace(), h2.trace());
        let s3 = k_wl(&s, 3).unwrap();
        let h3 = k_wl(&h, 3).unwrap();
        assert_ne!(s3.trace(), h3.trace());
        assert!(wl_m_equivalent(&s, &h, 2, DEFAULT_TUPLE_BUDGET).unwrap());
        assert!(!wl_m_equivalent(&s, &h, 3, DEFAULT_TUPLE_BUDGET).unwrap());
    }

    #[test]
    fn self_equivalence() {
        for spec in ["path:5", "cycle:7", "star:3"] {
            for m in 2..=4 {
                assert!(wl_m_equivalent(&g(spec), &g(spec), m, DEFAULT_TUPLE_BUDGET).unwrap());
            }
        }
    }

    #[test]
    fn m2_agrees_with_algebraic_isomorphism() {
        for s1 in 0..12u64 {
            for s2 in 0..4u64 {
                let a = random_connected(6, s1);
                let b = random_connected(6, 100 + s2);
                let via_tuples = wl_m_equivalent(&a, &b, 2, DEFAULT_TUPLE_BUDGET).unwrap();
                let via_cc = algebraically_isomorphic(&wl_closure(&a), &wl_closure(&b), &["E"])
                    .unwrap()
                    .is_some();
                assert_eq!(via_tuples, via_cc);
            }
        }
        // and a relabelled copy is always equivalent
        let a = random_connected(7, 3);
        let mut perm: Vec<usize> = (0..7).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(1));
        assert!(wl_m_equivalent(&a, &a.relabel(&perm), 3, DEFAULT_TUPLE_BUDGET).unwrap());
    }

    #[test]
    fn projection_two_is_identity_partition() {
        for spec in ["path:4", "cycle:6", "star:3"] {
            let x = g(spec);
            let kc = k_wl(&x, 2).unwrap();
            let p = project(&kc, &[0, 1]).unwrap();
            assert!(same_partition(&p.colors, wl_closure(&x).colors()));
        }
    }

    #[test]
    fn projection_methods_agree() {
        for seed in 0..6 {
            let x = random_connected(6, seed);
            let kc = k_wl(&x, 3).unwrap();
            for positions in [vec![0, 1], vec![0, 2], vec![1, 2], vec![0], vec![2], vec![0, 1, 2]] {
                let a = project(&kc, &positions).unwrap();
                let b = project_by_class_images(&kc, &positions).unwrap();
                assert!(same_partition(&a.colors, &b.colors), "{positions:?}");
            }
            let p = project(&kc, &[0, 1]).unwrap();
            assert!(is_coarsening(wl_closure(&x).colors(), &p.colors));
        }
    }

    #[test]
    fn hamming_is_three_closed() {
        let h = g("hamming:2,4");
        let kc = k_wl(&h, 3).unwrap();
        let p = project(&kc, &[0, 1]).unwrap();
        assert!(same_partition(&p.colors, wl_closure(&h).colors()));
        assert!(wl_m_closed(&h, 3, DEFAULT_TUPLE_BUDGET).unwrap());
    }

    #[test]
    fn m2_always_closed() {
        for seed in 0..5 {
            assert!(wl_m_closed(&random_connected(7, seed), 2, DEFAULT_TUPLE_BUDGET).unwrap());
        }
    }

    #[test]
    fn refusals() {
        let x = g("cycle:10");
        assert!(matches!(k_wl(&x, 1), Err(Error::BadDimension(1))));
        assert!(matches!(k_wl(&x, 7), Err(Error::BadDimension(7))));
        assert!(matches!(
            k_wl_with_budget(&x, 3, 999),
            Err(Error::BudgetExceeded { required: 1000, budget: 999 })
        ));
        let kc = k_wl(&x, 3).unwrap();
        assert!(project(&kc, &[]).is_err());
        assert!(project(&kc, &[1, 0]).is_err());
        assert!(project(&kc, &[0, 3]).is_err());
    }

    #[test]
    fn trace_invariant_under_relabeling() {
        let x = random_connected(8, 21);
        let base = k_wl(&x, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let mut perm: Vec<usize> = (0..8).collect();
            perm.shuffle(&mut rng);
            let y = x.relabel(&perm);
            let kc = k_wl(&y, 3).unwrap();
            assert_eq!(kc.trace(), base.trace());
            // colors move with the points
            for a in 0..8 {
                for b in 0..8 {
                    for c in 0..8 {
                        assert_eq!(
                            base.color_of(&[a, b, c]),
                            kc.color_of(&[perm[a], perm[b], perm[c]])
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn binary_export() {
        let kc = k_wl(&g("path:3"), 2).unwrap();
        let mut buf = Vec::new();
        kc.write_colors(&mut buf).unwrap();
        assert_eq!(buf.len(), 9 * 4);
        assert_eq!(u32::from_le_bytes(buf[4..8].try_into().unwrap()), kc.colors()[1]);
    }
}
