use std::collections::BTreeMap;

use super::{CoherentConfiguration, PairColoring};
use crate::error::{Error, Result};
use crate::graph::{BinaryRelation, Graph};
use crate::refine::{canonical_initial, refine_pairs};

/// The coherent closure `WL(r, s, ...)` of named relations on `0..n`.
///
/// The initial color of `(α, β)` is the key
/// `[α≠β, (α,β)∉r_1, ..., (α,β)∉r_m, (β,α)∉r_1, ..., (β,α)∉r_m]`, so the
/// diagonal and member cells receive the smallest names. Each relation is
/// recorded as a tag listing the colors it covers.
pub fn coherent_closure(
    n: usize,
    relations: &[(&str, &BinaryRelation)],
) -> Result<CoherentConfiguration> {
    if let Some((_, r)) = relations.iter().find(|(_, r)| r.n() != n) {
        return Err(Error::PointCountMismatch {
            left: n,
            right: r.n(),
        });
    }
    let (colors, rank) = canonical_initial(n * n, |cell, key| {
        let (a, b) = (cell / n, cell % n);
        key.push(u32::from(a != b));
        for (_, r) in relations {
            key.push(u32::from(!r.contains_cell(cell)));
        }
        for (_, r) in relations {
            key.push(u32::from(!r.contains(b, a)));
        }
    });
    let refined = refine_pairs(n, colors, rank);
    let coloring = PairColoring::from_parts(n, refined.colors, refined.rank);
    let mut tags = BTreeMap::new();
    for (name, r) in relations {
        let covering = coloring
            .colors_covering(r)
            .expect("stable coloring refines its input relations");
        tags.insert((*name).to_string(), covering);
    }
    Ok(CoherentConfiguration::trusted(coloring, tags, refined.ranks, true))
}

/// `WL(X)`: the closure of the edge set, tagged `"E"`.
pub fn wl_closure(g: &Graph) -> CoherentConfiguration {
    coherent_closure(g.n(), &[("E", &g.edge_relation())]).expect("edge relation matches n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::verify_axioms;
    use crate::graph::named_graph;

    #[test]
    fn complete_graph_is_trivial() {
        let cc = wl_closure(&named_graph("complete:4").unwrap());
        assert_eq!(cc.rank(), 2);
        assert_eq!(cc.tag("E").unwrap(), &[1]);
        assert_eq!(cc.color(0, 0), 0);
        assert_eq!(cc.color(0, 1), 1);
    }

    #[test]
    fn hamming_rank_three() {
        let cc = wl_closure(&named_graph("hamming:2,4").unwrap());
        assert_eq!(cc.rank(), 3);
        assert_eq!(cc.tag("E").unwrap(), &[1]);
        assert!(verify_axioms(cc.coloring()).is_coherent());
    }

    #[test]
    fn single_point_and_empty_list() {
        assert_eq!(coherent_closure(1, &[]).unwrap().rank(), 1);
        let cc = coherent_closure(5, &[]).unwrap();
        assert_eq!(cc.rank(), 2);
        assert_eq!(cc.rounds(), &[2]);
    }

    #[test]
    fn mismatched_relation_rejected() {
        let r = BinaryRelation::empty(3);
        assert!(coherent_closure(4, &[("r", &r)]).is_err());
    }

    #[test]
    fn directed_relation_gets_transpose_color() {
        // a directed 3-cycle: colors diagonal, arc, reverse arc
        let r = BinaryRelation::from_pairs(3, [(0, 1), (1, 2), (2, 0)]);
        let cc = coherent_closure(3, &[("r", &r)]).unwrap();
        assert_eq!(cc.rank(), 3);
        let arc = cc.color(0, 1);
        assert_eq!(cc.transpose_map()[arc as usize], cc.color(1, 0));
        assert_ne!(arc, cc.color(1, 0));
    }

    #[test]
    fn path_splits_fibers() {
        let cc = wl_closure(&named_graph("path:3").unwrap());
        // fibers: ends and middle
        assert_eq!(cc.fibers().len(), 2);
        assert!(!cc.is_homogeneous());
        assert_eq!(cc.fiber_of()[0], cc.fiber_of()[2]);
    }
}
