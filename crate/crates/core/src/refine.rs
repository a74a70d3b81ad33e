//! Canonical color renaming shared by the pair and tuple refinements.
//!
//! A refinement round computes one signature (a `u32` string whose first
//! entry is the previous color) per cell. Signatures are interned exactly,
//! then the distinct signatures are sorted lexicographically and renamed by
//! their rank in that order. Names therefore depend only on the multiset of
//! signatures, never on cell order or scheduling.

use rustc_hash::FxHashMap;

#[derive(Default)]
pub(crate) struct SignatureTable {
    index: FxHashMap<Box<[u32]>, u32>,
    keys: Vec<Box<[u32]>>,
    counts: Vec<u64>,
}

/// Outcome of sorting a signature table.
pub(crate) struct Canonical {
    /// Provisional id to canonical id.
    pub remap: Vec<u32>,
    /// Distinct signatures in canonical order, with multiplicities.
    pub table: Vec<(Box<[u32]>, u64)>,
}

impl SignatureTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, sig: &[u32]) -> u32 {
        if let Some(&id) = self.index.get(sig) {
            self.counts[id as usize] += 1;
            return id;
        }
        let id = self.keys.len() as u32;
        let key: Box<[u32]> = sig.into();
        self.index.insert(key.clone(), id);
        self.keys.push(key);
        self.counts.push(1);
        id
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn canonicalize(self) -> Canonical {
        let Self { keys, counts, .. } = self;
        let mut order: Vec<u32> = (0..keys.len() as u32).collect();
        order.sort_unstable_by(|&a, &b| keys[a as usize].cmp(&keys[b as usize]));
        let mut remap = vec![0u32; keys.len()];
        for (canon, &prov) in order.iter().enumerate() {
            remap[prov as usize] = canon as u32;
        }
        let mut slots: Vec<Option<Box<[u32]>>> = keys.into_iter().map(Some).collect();
        let table = order
            .iter()
            .map(|&p| (slots[p as usize].take().expect("each key once"), counts[p as usize]))
            .collect();
        Canonical { remap, table }
    }
}

/// Canonical coloring of cells from per-cell initial keys.
pub(crate) fn canonical_initial(
    cells: usize,
    mut key: impl FnMut(usize, &mut Vec<u32>),
) -> (Vec<u32>, usize) {
    let mut table = SignatureTable::new();
    let mut buf = Vec::new();
    let mut prov = Vec::with_capacity(cells);
    for cell in 0..cells {
        buf.clear();
        key(cell, &mut buf);
        prov.push(table.intern(&buf));
    }
    let rank = table.len();
    let canon = table.canonicalize();
    (prov.into_iter().map(|p| canon.remap[p as usize]).collect(), rank)
}

/// Result of refining a pair coloring to stability.
pub(crate) struct PairRefinement {
    pub colors: Vec<u32>,
    pub rank: usize,
    /// Rank after each round, starting with the initial coloring.
    pub ranks: Vec<usize>,
}

/// Refines a coloring of `Ω²` until a round produces no new color. Each
/// round replaces the color of `(α, β)` by the old color together with the
/// multiset of `(color(α, γ), color(γ, β))` over all `γ`.
pub(crate) fn refine_pairs(n: usize, mut colors: Vec<u32>, mut rank: usize) -> PairRefinement {
    let mut ranks = vec![rank];
    loop {
        let (next, next_rank) = pair_round(n, &colors, rank);
        if next_rank == rank {
            break;
        }
        colors = next;
        rank = next_rank;
        ranks.push(rank);
    }
    PairRefinement {
        colors,
        rank,
        ranks,
    }
}

/// Per-worker scratch for building pair signatures.
struct Scratch {
    order: Vec<u32>,
    bounds: Vec<(u32, usize, usize)>,
    counts: Vec<u32>,
    touched: Vec<u32>,
    small: Vec<u32>,
}

impl Scratch {
    fn new(rank: usize) -> Self {
        Self {
            order: Vec::new(),
            bounds: Vec::new(),
            counts: vec![0; rank],
            touched: Vec::new(),
            small: Vec::new(),
        }
    }
}

const SMALL_BUCKET: usize = 24;

/// Signatures of the cells in row `a`, appended to `out` with `offsets`
/// marking the end of each cell's slice.
fn row_signatures(
    n: usize,
    a: usize,
    colors: &[u32],
    transposed: &[u32],
    scratch: &mut Scratch,
    out: &mut Vec<u32>,
    offsets: &mut Vec<usize>,
) {
    let row = &colors[a * n..(a + 1) * n];
    // bucket the middle points γ by color(α, γ)
    scratch.order.clear();
    scratch.order.extend(0..n as u32);
    scratch.order.sort_unstable_by_key(|&g| row[g as usize]);
    scratch.bounds.clear();
    let mut start = 0;
    while start < n {
        let c = row[scratch.order[start] as usize];
        let mut end = start + 1;
        while end < n && row[scratch.order[end] as usize] == c {
            end += 1;
        }
        scratch.bounds.push((c, start, end));
        start = end;
    }
    for b in 0..n {
        // column β of the coloring, i.e. color(γ, β) indexed by γ
        let col = &transposed[b * n..(b + 1) * n];
        out.push(row[b]);
        for &(c, lo, hi) in &scratch.bounds {
            let bucket = &scratch.order[lo..hi];
            if bucket.len() <= SMALL_BUCKET {
                scratch.small.clear();
                scratch.small.extend(bucket.iter().map(|&g| col[g as usize]));
                scratch.small.sort_unstable();
                let mut i = 0;
                while i < scratch.small.len() {
                    let v = scratch.small[i];
                    let mut j = i + 1;
                    while j < scratch.small.len() && scratch.small[j] == v {
                        j += 1;
                    }
                    out.extend_from_slice(&[c, v, (j - i) as u32]);
                    i = j;
                }
            } else {
                for &g in bucket {
                    let v = col[g as usize];
                    if scratch.counts[v as usize] == 0 {
                        scratch.touched.push(v);
                    }
                    scratch.counts[v as usize] += 1;
                }
                scratch.touched.sort_unstable();
                for &v in &scratch.touched {
                    out.extend_from_slice(&[c, v, scratch.counts[v as usize]]);
                    scratch.counts[v as usize] = 0;
                }
                scratch.touched.clear();
            }
        }
        offsets.push(out.len());
    }
}

/// One refinement round; returns the canonical new coloring and its rank.
pub(crate) fn pair_round(n: usize, colors: &[u32], rank: usize) -> (Vec<u32>, usize) {
    use rayon::prelude::*;

    let mut transposed = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            transposed[b * n + a] = colors[a * n + b];
        }
    }
    let mut table = SignatureTable::new();
    let mut prov = Vec::with_capacity(n * n);
    let block = (rayon::current_num_threads() * 2).max(1);
    let mut row = 0;
    while row < n {
        let hi = (row + block).min(n);
        let rows: Vec<(Vec<u32>, Vec<usize>)> = (row..hi)
            .into_par_iter()
            .map_init(
                || Scratch::new(rank),
                |scratch, a| {
                    let mut out = Vec::new();
                    let mut offsets = Vec::with_capacity(n);
                    row_signatures(n, a, colors, &transposed, scratch, &mut out, &mut offsets);
                    (out, offsets)
                },
            )
            .collect();
        for (out, offsets) in rows {
            let mut start = 0;
            for end in offsets {
                prov.push(table.intern(&out[start..end]));
                start = end;
            }
        }
        row = hi;
    }
    let new_rank = table.len();
    let canon = table.canonicalize();
    let next = prov.into_iter().map(|p| canon.remap[p as usize]).collect();
    (next, new_rank)
}
