use std::collections::BTreeMap;

use crate::cc::{same_partition, CoherentConfiguration, PairColoring};
use crate::error::{Error, Result};
use crate::graph::BinaryRelation;
use crate::refine::{canonical_initial, refine_pairs};

/// Default limit on `n` for the 2-extension, which colors `n⁴` cells.
pub const DEFAULT_EXTENSION_CAP: usize = 24;

/// `X̂ = WL(X ⊗ X, 1_Δ)` on the points of `Ω²`, where `(α, β)` has index
/// `α·n + β`.
#[derive(Clone, Debug)]
pub struct TwoExtension {
    pub base: CoherentConfiguration,
    pub extended: CoherentConfiguration,
    /// Indices of the points `(α, α)`.
    pub diagonal_points: Vec<usize>,
}

pub fn two_extension(cc: &CoherentConfiguration) -> Result<TwoExtension> {
    two_extension_with_cap(cc, DEFAULT_EXTENSION_CAP)
}

pub fn two_extension_with_cap(cc: &CoherentConfiguration, cap: usize) -> Result<TwoExtension> {
    let n = cc.n();
    if n > cap {
        return Err(Error::SizeCap {
            what: "2-extension".into(),
            size: n,
            cap,
        });
    }
    let big = n * n;
    let rank = cc.rank() as u32;
    let (colors, initial_rank) = canonical_initial(big * big, |cell, key| {
        let (x, y) = (cell / big, cell % big);
        let (a, b) = (x / n, x % n);
        let (c, d) = (y / n, y % n);
        key.push(u32::from(!(x == y && a == b)));
        key.push(cc.color(a, c) * rank + cc.color(b, d));
    });
    let refined = refine_pairs(big, colors, initial_rank);
    let coloring = PairColoring::from_parts(big, refined.colors, refined.rank);
    let diagonal_points: Vec<usize> = (0..n).map(|a| a * n + a).collect();
    let delta = BinaryRelation::diagonal_of(big, diagonal_points.iter().copied());
    let mut tags = BTreeMap::new();
    tags.insert(
        "diagonal".to_string(),
        coloring
            .colors_covering(&delta)
            .expect("1_Δ is an input relation"),
    );
    let extended = CoherentConfiguration::trusted(coloring, tags, refined.ranks, true);
    Ok(TwoExtension {
        base: cc.clone(),
        extended,
        diagonal_points,
    })
}

/// `X̄`: the extension restricted to `Δ` and carried back along
/// `(α, α) ↦ α`. Color names keep the order of the extension's names.
pub fn two_closure(cc: &CoherentConfiguration) -> Result<CoherentConfiguration> {
    two_closure_with_cap(cc, DEFAULT_EXTENSION_CAP)
}

pub fn two_closure_with_cap(cc: &CoherentConfiguration, cap: usize) -> Result<CoherentConfiguration> {
    let ext = two_extension_with_cap(cc, cap)?;
    let n = cc.n();
    let raw: Vec<u32> = (0..n * n)
        .map(|cell| {
            let (a, b) = (cell / n, cell % n);
            ext.extended.color(a * n + a, b * n + b)
        })
        .collect();
    let mut used: Vec<u32> = raw.clone();
    used.sort_unstable();
    used.dedup();
    let colors: Vec<u32> = raw
        .iter()
        .map(|c| used.binary_search(c).expect("present") as u32)
        .collect();
    let coloring = PairColoring::from_parts(n, colors, used.len());
    let mut tags = BTreeMap::new();
    for (name, tag) in cc.tags() {
        let r = cc.relation_of(tag);
        if let Some(covering) = coloring.colors_covering(&r) {
            tags.insert(name.clone(), covering);
        }
    }
    Ok(CoherentConfiguration::trusted(coloring, tags, Vec::new(), false))
}

/// `X̄ = X` as partitions.
pub fn is_two_closed(cc: &CoherentConfiguration) -> Result<bool> {
    is_two_closed_with_cap(cc, DEFAULT_EXTENSION_CAP)
}

pub fn is_two_closed_with_cap(cc: &CoherentConfiguration, cap: usize) -> Result<bool> {
    Ok(same_partition(two_closure_with_cap(cc, cap)?.colors(), cc.colors()))
}

/// `cyl_s(i, j) = {(x, y) ∈ Ω² × Ω² : (x_i, y_j) ∈ s}` with coordinates
/// `i, j ∈ {0, 1}`; `s` must be a union of colors of `cc`.
pub fn cylinder(cc: &CoherentConfiguration, s: &BinaryRelation, i: usize, j: usize) -> Result<BinaryRelation> {
    if i > 1 || j > 1 {
        return Err(Error::InvalidParameter {
            name: "cylinder".into(),
            reason: format!("coordinates ({i}, {j}) must be 0 or 1"),
        });
    }
    if !cc.is_relation(s) {
        return Err(Error::NotColorExact {
            context: "cylinder base relation".into(),
        });
    }
    Ok(cylinder_unchecked(s, i, j))
}

/// The cylinder over an arbitrary relation.
pub(crate) fn cylinder_unchecked(s: &BinaryRelation, i: usize, j: usize) -> BinaryRelation {
    let n = s.n();
    let big = n * n;
    let coord = |x: usize, k: usize| if k == 0 { x / n } else { x % n };
    BinaryRelation::from_cell_predicate(big, |cell| {
        let (x, y) = (cell / big, cell % big);
        s.contains(coord(x, i), coord(y, j))
    })
}
