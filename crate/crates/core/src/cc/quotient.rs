use std::collections::BTreeMap;

use super::{verify_axioms, CoherentConfiguration, PairColoring, PartialParabolic};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Renames the colors that occur in `colors` to `0..`, keeping their order.
fn compact(colors: &[u32], rank: usize) -> (Vec<u32>, Vec<u32>, usize) {
    let mut used = vec![false; rank];
    for &c in colors {
        used[c as usize] = true;
    }
    let mut map = vec![u32::MAX; rank];
    let mut next = 0;
    for (c, &u) in used.iter().enumerate() {
        if u {
            map[c] = next;
            next += 1;
        }
    }
    (colors.iter().map(|&c| map[c as usize]).collect(), map, next as usize)
}

fn transport_tags(tags: &BTreeMap<String, Vec<u32>>, map: &[u32]) -> BTreeMap<String, Vec<u32>> {
    tags.iter()
        .map(|(name, colors)| {
            let mut out: Vec<u32> = colors
                .iter()
                .map(|&c| map[c as usize])
                .filter(|&c| c != u32::MAX)
                .collect();
            out.sort_unstable();
            out.dedup();
            (name.clone(), out)
        })
        .collect()
}

/// `X_Δ` for a homogeneity set `Δ`; the points of the result are `Δ` in
/// increasing order. Colors keep their relative order.
pub fn restriction(cc: &CoherentConfiguration, delta: &[usize]) -> Result<CoherentConfiguration> {
    let mut delta = delta.to_vec();
    delta.sort_unstable();
    delta.dedup();
    if delta.is_empty() || delta.iter().any(|&a| a >= cc.n()) {
        return Err(Error::NotHomogeneitySet("empty or out of range".into()));
    }
    let mut member = vec![false; cc.n()];
    for &a in &delta {
        member[a] = true;
    }
    let fibers = cc.fiber_of();
    for a in 0..cc.n() {
        if !member[a] && delta.iter().any(|&d| fibers[d] == fibers[a]) {
            return Err(Error::NotHomogeneitySet(format!(
                "point {a} shares a fiber with the set but is missing"
            )));
        }
    }
    let m = delta.len();
    let raw: Vec<u32> = (0..m * m)
        .map(|cell| cc.color(delta[cell / m], delta[cell % m]))
        .collect();
    let (colors, map, rank) = compact(&raw, cc.rank());
    let coloring = PairColoring::from_parts(m, colors, rank);
    let report = verify_axioms(&coloring);
    if !report.is_coherent() {
        return Err(Error::NotCoherent(Box::new(report)));
    }
    Ok(CoherentConfiguration::trusted(
        coloring,
        transport_tags(cc.tags(), &map),
        Vec::new(),
        cc.is_canonical(),
    ))
}

/// `X_{Δ/e}` for a partial parabolic `e` with support `Δ`. Points are the
/// classes of `e` in their stored order; the color of `(Λ, Γ)` is the set
/// `{s : s_{Λ,Γ} ≠ ∅}`, named by its smallest member.
pub fn quotient(cc: &CoherentConfiguration, e: &PartialParabolic) -> Result<CoherentConfiguration> {
    if e.n() != cc.n() {
        return Err(Error::PointCountMismatch {
            left: cc.n(),
            right: e.n(),
        });
    }
    if !cc.is_relation(&e.relation()) {
        return Err(Error::NotPartialParabolic(
            "relation is not a union of basis colors".into(),
        ));
    }
    let classes = e.classes();
    let k = classes.len();
    let rank = cc.rank();
    // colors met by each block Λ × Γ
    let mut met: Vec<Vec<u32>> = Vec::with_capacity(k * k);
    let mut uf = UnionFind::new(rank);
    for lam in classes {
        for gam in classes {
            let mut here: Vec<u32> = lam
                .iter()
                .flat_map(|&a| gam.iter().map(move |&b| cc.color(a, b)))
                .collect();
            here.sort_unstable();
            here.dedup();
            for w in here.windows(2) {
                uf.union(w[0] as usize, w[1] as usize);
            }
            met.push(here);
        }
    }
    // each block must meet a whole group, otherwise the sets s_{Δ/e}
    // overlap without coinciding
    let mut group: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    for here in &met {
        for &c in here {
            group.entry(uf.find(c as usize)).or_default().push(c);
        }
    }
    for g in group.values_mut() {
        g.sort_unstable();
        g.dedup();
    }
    let mut raw = Vec::with_capacity(k * k);
    for here in &met {
        let root = uf.find(here[0] as usize);
        if group[&root] != *here {
            return Err(Error::MalformedColoring(
                "quotient relations do not partition the classes".into(),
            ));
        }
        raw.push(here[0]);
    }
    let (colors, map, qrank) = compact(&raw, rank);
    let coloring = PairColoring::from_parts(k, colors, qrank);
    let report = verify_axioms(&coloring);
    if !report.is_coherent() {
        return Err(Error::NotCoherent(Box::new(report)));
    }
    // a tag survives when it is a union of whole groups
    let mut tags = BTreeMap::new();
    for (name, tag) in cc.tags() {
        let inside: Vec<bool> = (0..rank as u32).map(|c| tag.contains(&c)).collect();
        let exact = group
            .values()
            .all(|g| g.iter().all(|&c| inside[c as usize]) || g.iter().all(|&c| !inside[c as usize]));
        if exact {
            let mut out: Vec<u32> = group
                .values()
                .filter(|g| inside[g[0] as usize])
                .map(|g| map[g[0] as usize])
                .filter(|&c| c != u32::MAX)
                .collect();
            out.sort_unstable();
            tags.insert(name.clone(), out);
        }
    }
    Ok(CoherentConfiguration::trusted(coloring, tags, Vec::new(), false))
}
