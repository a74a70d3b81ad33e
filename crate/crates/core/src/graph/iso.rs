use super::Graph;
use crate::cc::{canonical_signature, wl_closure, CoherentConfiguration};
use crate::error::{Error, Result};

/// Largest vertex count the backtracking search accepts by default.
pub const DEFAULT_ISO_CAP: usize = 12;

/// Exact isomorphism test with the default size cap.
pub fn graph_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    graph_isomorphic_with_cap(g1, g2, DEFAULT_ISO_CAP)
}

/// Exact isomorphism test.
///
/// Cheap invariants and the canonical closures are compared first. When the
/// closures agree, every isomorphism maps each canonical pair color onto
/// itself, so the search only pairs vertices whose colors toward all
/// previously placed vertices match. Graphs that reach the search with more
/// than `cap` vertices are refused.
pub fn graph_isomorphic_with_cap(g1: &Graph, g2: &Graph, cap: usize) -> Result<bool> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return Ok(false);
    }
    let degrees = |g: &Graph| {
        let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
        d.sort_unstable();
        d
    };
    if degrees(g1) != degrees(g2) {
        return Ok(false);
    }
    let c1 = wl_closure(g1);
    let c2 = wl_closure(g2);
    if canonical_signature(&c1)? != canonical_signature(&c2)? {
        return Ok(false);
    }
    if g1 == g2 {
        return Ok(true);
    }
    let n = g1.n();
    if n > cap {
        return Err(Error::SizeCap {
            what: "graph isomorphism search".into(),
            size: n,
            cap,
        });
    }
    Ok(find_map(&c1, &c2).is_some())
}

/// A color-preserving point bijection between two closures with identical
/// canonical names, if one exists.
fn find_map(c1: &CoherentConfiguration, c2: &CoherentConfiguration) -> Option<Vec<usize>> {
    let n = c1.n();
    // place vertices of small fibers first
    let mut fiber_size = vec![0usize; n];
    for a in 0..n {
        fiber_size[c1.fiber_of()[a] as usize] += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&a| (fiber_size[c1.fiber_of()[a] as usize], a));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        depth: usize,
        order: &[usize],
        c1: &CoherentConfiguration,
        c2: &CoherentConfiguration,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let a = order[depth];
        for b in 0..c2.n() {
            if used[b] || c1.color(a, a) != c2.color(b, b) {
                continue;
            }
            let fits = order[..depth].iter().all(|&p| {
                c1.color(p, a) == c2.color(map[p], b) && c1.color(a, p) == c2.color(b, map[p])
            });
            if !fits {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if go(depth + 1, order, c1, c2, map, used) {
                return true;
            }
            used[b] = false;
        }
        map[a] = usize::MAX;
        false
    }
    go(0, &order, c1, c2, &mut map, &mut used).then_some(map)
}
