use std::collections::BTreeMap;

use serde::Serialize;

use super::CoherentConfiguration;
use crate::error::{Error, Result};

/// Largest rank the backtracking search accepts.
pub const DEFAULT_RANK_CAP: usize = 40;

/// Relabeling-invariant description of a closure-built configuration.
///
/// For configurations produced by the canonical closure, equal signatures
/// mean the identity on color names is an algebraic isomorphism that also
/// matches the tagged relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalSignature {
    pub n: usize,
    pub rank: usize,
    pub class_sizes: Vec<usize>,
    pub transpose_map: Vec<u32>,
    pub reflexive_colors: Vec<u32>,
    pub tags: BTreeMap<String, Vec<u32>>,
    /// Nonzero `(r, s, t, c_{r,s}^t)` ordered by `(t, r, s)`.
    pub tensor: Vec<(u32, u32, u32, u32)>,
}

pub fn canonical_signature(cc: &CoherentConfiguration) -> Result<CanonicalSignature> {
    let tensor = cc
        .intersection_numbers()?
        .entries()
        .map(|e| (e.r, e.s, e.t, e.c))
        .collect();
    Ok(CanonicalSignature {
        n: cc.n(),
        rank: cc.rank(),
        class_sizes: cc.class_sizes(),
        transpose_map: cc.transpose_map().to_vec(),
        reflexive_colors: cc.reflexive_colors(),
        tags: cc.tags().clone(),
        tensor,
    })
}

/// A color bijection from one configuration to another.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicIsoWitness {
    pub color_bijection: Vec<u32>,
    pub verified: bool,
}

fn tag_colors<'a>(cc: &'a CoherentConfiguration, tags: &[&str]) -> Result<Vec<&'a [u32]>> {
    tags.iter().map(|t| cc.tag(t)).collect()
}

/// Entry-by-entry check that `map` preserves transposes, reflexive colors,
/// the named tags and every intersection number.
pub fn verify_witness(
    cc1: &CoherentConfiguration,
    cc2: &CoherentConfiguration,
    map: &[u32],
    tags: &[&str],
) -> Result<bool> {
    let k = cc1.rank();
    if cc2.rank() != k || map.len() != k {
        return Ok(false);
    }
    let mut hit = vec![false; k];
    for &y in map {
        if y as usize >= k || std::mem::replace(&mut hit[y as usize], true) {
            return Ok(false);
        }
    }
    let (tr1, tr2) = (cc1.transpose_map(), cc2.transpose_map());
    for x in 0..k {
        let y = map[x] as usize;
        if map[tr1[x] as usize] != tr2[y]
            || cc1.is_reflexive(x as u32) != cc2.is_reflexive(y as u32)
        {
            return Ok(false);
        }
    }
    for (t1, t2) in tag_colors(cc1, tags)?.into_iter().zip(tag_colors(cc2, tags)?) {
        let mut image: Vec<u32> = t1.iter().map(|&c| map[c as usize]).collect();
        image.sort_unstable();
        if image != t2 {
            return Ok(false);
        }
    }
    let a = cc1.intersection_numbers()?.dense();
    let b = cc2.intersection_numbers()?.dense();
    for r in 0..k {
        for s in 0..k {
            for t in 0..k {
                let (fr, fs, ft) = (map[r] as usize, map[s] as usize, map[t] as usize);
                if a[(r * k + s) * k + t] != b[(fr * k + fs) * k + ft] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Looks for an algebraic isomorphism `cc1 → cc2` mapping each named tag of
/// `cc1` onto the same tag of `cc2`.
///
/// Two canonical closures whose tag sets are exactly `tags` are compared by
/// signature: WL-equivalent inputs produce identical names, so the identity
/// is the witness when one exists. Other configurations go through
/// [`search_algebraic_isomorphism`].
pub fn algebraically_isomorphic(
    cc1: &CoherentConfiguration,
    cc2: &CoherentConfiguration,
    tags: &[&str],
) -> Result<Option<AlgebraicIsoWitness>> {
    tag_colors(cc1, tags)?;
    tag_colors(cc2, tags)?;
    let all_tags = |cc: &CoherentConfiguration| {
        cc.tags().len() == tags.len() && tags.iter().all(|t| cc.tags().contains_key(*t))
    };
    if cc1.is_canonical() && cc2.is_canonical() && all_tags(cc1) && all_tags(cc2) {
        if canonical_signature(cc1)? != canonical_signature(cc2)? {
            return Ok(None);
        }
        let identity: Vec<u32> = (0..cc1.rank() as u32).collect();
        let verified = verify_witness(cc1, cc2, &identity, tags)?;
        return Ok(Some(AlgebraicIsoWitness {
            color_bijection: identity,
            verified,
        }));
    }
    search_algebraic_isomorphism(cc1, cc2, tags, DEFAULT_RANK_CAP)
}

/// Per-color data every algebraic isomorphism preserves.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct ColorInvariant {
    size: usize,
    reflexive: bool,
    symmetric: bool,
    tags: Vec<bool>,
    as_t: Vec<u32>,
    as_r: Vec<u32>,
    as_s: Vec<u32>,
}

fn invariants(cc: &CoherentConfiguration, dense: &[u32], tags: &[&[u32]]) -> Vec<ColorInvariant> {
    let k = cc.rank();
    let sizes = cc.class_sizes();
    (0..k)
        .map(|c| {
            let mut as_t = Vec::new();
            let mut as_r = Vec::new();
            let mut as_s = Vec::new();
            for u in 0..k {
                for v in 0..k {
                    as_t.push(dense[(u * k + v) * k + c]);
                    as_r.push(dense[(c * k + u) * k + v]);
                    as_s.push(dense[(u * k + c) * k + v]);
                }
            }
            for v in [&mut as_t, &mut as_r, &mut as_s] {
                v.retain(|&x| x != 0);
                v.sort_unstable();
            }
            ColorInvariant {
                size: sizes[c],
                reflexive: cc.is_reflexive(c as u32),
                symmetric: cc.transpose_map()[c] as usize == c,
                tags: tags.iter().map(|t| t.contains(&(c as u32))).collect(),
                as_t,
                as_r,
                as_s,
            }
        })
        .collect()
}

struct Search<'a> {
    k: usize,
    a: &'a [u32],
    b: &'a [u32],
    tr1: &'a [u32],
    tr2: &'a [u32],
    order: Vec<usize>,
    candidates: Vec<Vec<u32>>,
    map: Vec<u32>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn consistent(&self, x: usize, y: usize, placed: &[usize]) -> bool {
        let k = self.k;
        let tx = self.tr1[x] as usize;
        if self.map[tx] != u32::MAX && self.map[tx] != self.tr2[y] {
            return false;
        }
        if tx == x && self.tr2[y] as usize != y {
            return false;
        }
        let f = |c: usize| if c == x { y } else { self.map[c] as usize };
        let check = |r: usize, s: usize, t: usize| {
            self.a[(r * k + s) * k + t] == self.b[(f(r) * k + f(s)) * k + f(t)]
        };
        let mut with_x: Vec<usize> = placed.to_vec();
        with_x.push(x);
        for &u in &with_x {
            for &v in &with_x {
                if !(check(x, u, v) && check(u, x, v) && check(u, v, x)) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.k {
            return true;
        }
        let x = self.order[depth];
        let placed: Vec<usize> = self.order[..depth].to_vec();
        for i in 0..self.candidates[x].len() {
            let y = self.candidates[x][i] as usize;
            if self.used[y] || !self.consistent(x, y, &placed) {
                continue;
            }
            self.map[x] = y as u32;
            self.used[y] = true;
            if self.run(depth + 1) {
                return true;
            }
            self.map[x] = u32::MAX;
            self.used[y] = false;
        }
        false
    }
}

/// Backtracking search over color bijections that preserve the full
/// intersection tensor, transposes, reflexive colors and the named tags.
pub fn search_algebraic_isomorphism(
    cc1: &CoherentConfiguration,
    cc2: &CoherentConfiguration,
    tags: &[&str],
    rank_cap: usize,
) -> Result<Option<AlgebraicIsoWitness>> {
    let t1 = tag_colors(cc1, tags)?;
    let t2 = tag_colors(cc2, tags)?;
    let k = cc1.rank();
    if cc1.n() != cc2.n() || cc2.rank() != k {
        return Ok(None);
    }
    if k > rank_cap {
        return Err(Error::SizeCap {
            what: "algebraic isomorphism search".into(),
            size: k,
            cap: rank_cap,
        });
    }
    let a = cc1.intersection_numbers()?.dense();
    let b = cc2.intersection_numbers()?.dense();
    let inv1 = invariants(cc1, &a, &t1);
    let inv2 = invariants(cc2, &b, &t2);
    let mut s1 = inv1.clone();
    let mut s2 = inv2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return Ok(None);
    }
    let candidates: Vec<Vec<u32>> = inv1
        .iter()
        .map(|i| (0..k as u32).filter(|&y| inv2[y as usize] == *i).collect())
        .collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&x| (candidates[x].len(), x));
    let mut search = Search {
        k,
        a: &a,
        b: &b,
        tr1: cc1.transpose_map(),
        tr2: cc2.transpose_map(),
        order,
        candidates,
        map: vec![u32::MAX; k],
        used: vec![false; k],
    };
    if !search.run(0) {
        return Ok(None);
    }
    let map = search.map;
    let verified = verify_witness(cc1, cc2, &map, tags)?;
    Ok(Some(AlgebraicIsoWitness {
        color_bijection: map,
        verified,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::{tensor_product, wl_closure};
    use crate::graph::{named_graph, random_connected};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shrikhande_and_hamming() {
        let s = wl_closure(&named_graph("shrikhande").unwrap());
        let h = wl_closure(&named_graph("hamming:2,4").unwrap());
        let w = algebraically_isomorphic(&s, &h, &["E"]).unwrap().unwrap();
        assert!(w.verified);
        assert_eq!(w.color_bijection, vec![0, 1, 2]);
        // the search path agrees
        let w2 = search_algebraic_isomorphism(&s, &h, &["E"], 40).unwrap().unwrap();
        assert!(w2.verified);
        assert_eq!(w2.color_bijection[1], 1);
    }

    #[test]
    fn complete_graphs_of_different_orders() {
        let a = wl_closure(&named_graph("complete:3").unwrap());
        let b = wl_closure(&named_graph("complete:4").unwrap());
        assert!(algebraically_isomorphic(&a, &b, &["E"]).unwrap().is_none());
        assert!(search_algebraic_isomorphism(&a, &b, &["E"], 40).unwrap().is_none());
    }

    #[test]
    fn self_witness_is_identity() {
        let cc = wl_closure(&named_graph("path:5").unwrap());
        let w = algebraically_isomorphic(&cc, &cc, &["E"]).unwrap().unwrap();
        assert!(w.verified);
        assert_eq!(w.color_bijection, (0..cc.rank() as u32).collect::<Vec<_>>());
    }

    #[test]
    fn signature_stable_under_relabeling() {
        let g = random_connected(9, 5);
        let base = canonical_signature(&wl_closure(&g)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut rng);
            let sig = canonical_signature(&wl_closure(&g.relabel(&perm))).unwrap();
            assert_eq!(sig, base);
        }
    }

    #[test]
    fn search_finds_nontrivial_bijection() {
        // swapping the factors of a tensor product is an algebraic
        // isomorphism that permutes color names
        let a = wl_closure(&named_graph("complete:3").unwrap());
        let b = wl_closure(&named_graph("path:3").unwrap());
        let ab = tensor_product(&[&a, &b]).unwrap();
        let ba = tensor_product(&[&b, &a]).unwrap();
        let w = algebraically_isomorphic(&ab, &ba, &[]).unwrap().unwrap();
        assert!(w.verified);
        let rb = b.rank() as u32;
        let ra = a.rank() as u32;
        for x in 0..ab.rank() as u32 {
            let (ca, cb) = (x / rb, x % rb);
            assert_eq!(w.color_bijection[x as usize], cb * ra + ca);
        }
    }

    #[test]
    fn rank_cap_refuses() {
        let cc = crate::cc::CoherentConfiguration::discrete(7);
        assert!(matches!(
            search_algebraic_isomorphism(&cc, &cc, &[], 40),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn unknown_tag_is_an_error() {
        let cc = wl_closure(&named_graph("path:3").unwrap());
        assert!(matches!(
            algebraically_isomorphic(&cc, &cc, &["F"]),
            Err(Error::UnknownTag(_))
        ));
    }
}
