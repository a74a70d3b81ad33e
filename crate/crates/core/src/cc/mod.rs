//! Coherent configurations on a finite point set.
//!
//! A configuration is stored as a color matrix over `Ω²`; basis relations
//! are the color classes. Configurations built by [`coherent_closure`] carry
//! canonical color names: relabeling the points of the input permutes the
//! matrix but leaves the names, the transpose map and the intersection
//! numbers untouched.

mod algebraic;
mod axioms;
mod closure;
mod intersection;
mod parabolic;
mod quotient;
mod tensor;

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BinaryRelation, Graph};

pub use algebraic::{
    algebraically_isomorphic, canonical_signature, search_algebraic_isomorphism,
    verify_witness, AlgebraicIsoWitness, CanonicalSignature, DEFAULT_RANK_CAP,
};
pub use axioms::{verify_axioms, AxiomReport};
pub use closure::{coherent_closure, wl_closure};
pub use intersection::IntersectionTensor;
pub use parabolic::{equivalence_closure, indecomposable_components, is_parabolic, PartialParabolic};
pub use quotient::{quotient, restriction};
pub use tensor::tensor_product;

/// A partition of `Ω²` into numbered color classes `0..rank`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairColoring {
    n: usize,
    colors: Vec<u32>,
    rank: usize,
}

impl PairColoring {
    /// Wraps a row-major color matrix whose ids are exactly `0..rank`.
    pub fn from_colors(n: usize, colors: Vec<u32>) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::MalformedColoring(format!(
                "expected {} cells, got {}",
                n * n,
                colors.len()
            )));
        }
        let rank = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut used = vec![false; rank];
        for &c in &colors {
            used[c as usize] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::MalformedColoring(format!("color {missing} is unused")));
        }
        Ok(Self { n, colors, rank })
    }

    /// Renumbers arbitrary labels by first appearance.
    pub fn normalized(n: usize, labels: &[u32]) -> Result<Self> {
        let mut map = rustc_hash::FxHashMap::default();
        let colors = labels
            .iter()
            .map(|&l| {
                let next = map.len() as u32;
                *map.entry(l).or_insert(next)
            })
            .collect();
        Self::from_colors(n, colors)
    }

    pub(crate) fn from_parts(n: usize, colors: Vec<u32>, rank: usize) -> Self {
        debug_assert_eq!(colors.len(), n * n);
        Self { n, colors, rank }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    pub fn color(&self, a: usize, b: usize) -> u32 {
        self.colors[a * self.n + b]
    }

    /// Row-major color matrix.
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    /// Number of cells of each color.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.rank];
        for &c in &self.colors {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// Colors whose classes exactly cover `r`, or `None` if `r` cuts a class.
    pub fn colors_covering(&self, r: &BinaryRelation) -> Option<Vec<u32>> {
        if r.n() != self.n {
            return None;
        }
        let mut inside = vec![0usize; self.rank];
        for cell in r.cells() {
            inside[self.colors[cell] as usize] += 1;
        }
        let sizes = self.class_sizes();
        let mut out = Vec::new();
        for c in 0..self.rank {
            if inside[c] == sizes[c] {
                out.push(c as u32);
            } else if inside[c] != 0 {
                return None;
            }
        }
        Some(out)
    }

    /// The union of the given color classes.
    pub fn relation_of(&self, colors: &[u32]) -> BinaryRelation {
        let mut member = vec![false; self.rank];
        for &c in colors {
            member[c as usize] = true;
        }
        BinaryRelation::from_cell_predicate(self.n, |i| member[self.colors[i] as usize])
    }
}

/// A coherent configuration together with its derived data.
#[derive(Debug)]
pub struct CoherentConfiguration {
    coloring: PairColoring,
    transpose: Vec<u32>,
    reflexive: Vec<bool>,
    fiber_of: Vec<u32>,
    tags: BTreeMap<String, Vec<u32>>,
    /// Rank after each refinement round, for closure-built configurations.
    rounds: Vec<usize>,
    canonical: bool,
    tensor: OnceLock<IntersectionTensor>,
}

impl Clone for CoherentConfiguration {
    fn clone(&self) -> Self {
        let tensor = OnceLock::new();
        if let Some(t) = self.tensor.get() {
            let _ = tensor.set(t.clone());
        }
        Self {
            coloring: self.coloring.clone(),
            transpose: self.transpose.clone(),
            reflexive: self.reflexive.clone(),
            fiber_of: self.fiber_of.clone(),
            tags: self.tags.clone(),
            rounds: self.rounds.clone(),
            canonical: self.canonical,
            tensor,
        }
    }
}

impl PartialEq for CoherentConfiguration {
    /// Equal color matrices and tags (names included, not just partitions).
    fn eq(&self, other: &Self) -> bool {
        self.coloring == other.coloring && self.tags == other.tags
    }
}

impl CoherentConfiguration {
    /// Checks the axioms and that every tag is a union of colors.
    pub fn new(coloring: PairColoring, tags: BTreeMap<String, Vec<u32>>) -> Result<Self> {
        let report = verify_axioms(&coloring);
        if !report.is_coherent() {
            return Err(Error::NotCoherent(Box::new(report)));
        }
        for (name, colors) in &tags {
            if colors.iter().any(|&c| c as usize >= coloring.rank) {
                return Err(Error::MalformedColoring(format!("tag {name} names unknown colors")));
            }
        }
        Ok(Self::trusted(coloring, tags, Vec::new(), false))
    }

    /// Builds the derived data for a coloring known to be coherent.
    pub(crate) fn trusted(
        coloring: PairColoring,
        tags: BTreeMap<String, Vec<u32>>,
        rounds: Vec<usize>,
        canonical: bool,
    ) -> Self {
        let n = coloring.n;
        let rank = coloring.rank;
        let mut transpose = vec![u32::MAX; rank];
        let mut reflexive = vec![false; rank];
        for a in 0..n {
            for b in 0..n {
                let c = coloring.color(a, b) as usize;
                transpose[c] = coloring.color(b, a);
                if a == b {
                    reflexive[c] = true;
                }
            }
        }
        let mut fiber_index = vec![u32::MAX; rank];
        let mut next = 0;
        for (c, &is_refl) in reflexive.iter().enumerate() {
            if is_refl {
                fiber_index[c] = next;
                next += 1;
            }
        }
        let fiber_of = (0..n)
            .map(|a| fiber_index[coloring.color(a, a) as usize])
            .collect();
        Self {
            coloring,
            transpose,
            reflexive,
            fiber_of,
            tags,
            rounds,
            canonical,
            tensor: OnceLock::new(),
        }
    }

    /// The trivial configuration: the diagonal and its complement.
    pub fn trivial(n: usize) -> Self {
        coherent_closure(n, &[]).expect("closure of the empty relation set")
    }

    /// The discrete configuration with one color per cell.
    pub fn discrete(n: usize) -> Self {
        let colors = (0..(n * n) as u32).collect();
        Self::trusted(
            PairColoring::from_parts(n, colors, n * n),
            BTreeMap::new(),
            Vec::new(),
            false,
        )
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.coloring.n
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.coloring.rank
    }

    #[inline]
    pub fn color(&self, a: usize, b: usize) -> u32 {
        self.coloring.color(a, b)
    }

    pub fn coloring(&self) -> &PairColoring {
        &self.coloring
    }

    pub fn colors(&self) -> &[u32] {
        self.coloring.colors()
    }

    /// `s ↦ s*`.
    pub fn transpose_map(&self) -> &[u32] {
        &self.transpose
    }

    pub fn is_reflexive(&self, c: u32) -> bool {
        self.reflexive[c as usize]
    }

    pub fn reflexive_colors(&self) -> Vec<u32> {
        (0..self.rank() as u32).filter(|&c| self.is_reflexive(c)).collect()
    }

    /// Fiber index of each point; fibers are numbered in order of their
    /// reflexive colors.
    pub fn fiber_of(&self) -> &[u32] {
        &self.fiber_of
    }

    /// Point sets of the fibers.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let count = self.reflexive.iter().filter(|&&r| r).count();
        let mut out = vec![Vec::new(); count];
        for (a, &f) in self.fiber_of.iter().enumerate() {
            out[f as usize].push(a);
        }
        out
    }

    pub fn is_homogeneous(&self) -> bool {
        self.reflexive.iter().filter(|&&r| r).count() <= 1
    }

    pub fn tags(&self) -> &BTreeMap<String, Vec<u32>> {
        &self.tags
    }

    pub fn tag(&self, name: &str) -> Result<&[u32]> {
        self.tags
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownTag(name.to_string()))
    }

    /// The relation named `name`, as a union of its colors.
    pub fn tagged_relation(&self, name: &str) -> Result<BinaryRelation> {
        Ok(self.coloring.relation_of(self.tag(name)?))
    }

    pub fn with_tag(mut self, name: &str, r: &BinaryRelation) -> Result<Self> {
        let colors = self.colors_covering(r).ok_or_else(|| Error::NotColorExact {
            context: format!("tag {name}"),
        })?;
        self.tags.insert(name.to_string(), colors);
        Ok(self)
    }

    pub fn rounds(&self) -> &[usize] {
        &self.rounds
    }

    /// True for configurations whose color names come from the canonical
    /// closure construction.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn colors_covering(&self, r: &BinaryRelation) -> Option<Vec<u32>> {
        self.coloring.colors_covering(r)
    }

    pub fn relation_of(&self, colors: &[u32]) -> BinaryRelation {
        self.coloring.relation_of(colors)
    }

    pub fn basis_relation(&self, c: u32) -> BinaryRelation {
        self.coloring.relation_of(&[c])
    }

    pub fn is_relation(&self, r: &BinaryRelation) -> bool {
        self.colors_covering(r).is_some()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.coloring.class_sizes()
    }

    /// Intersection numbers, computed on first use.
    pub fn intersection_numbers(&self) -> Result<&IntersectionTensor> {
        if let Some(t) = self.tensor.get() {
            return Ok(t);
        }
        let t = IntersectionTensor::compute(self)?;
        let _ = self.tensor.set(t);
        Ok(self.tensor.get().expect("just set"))
    }

    pub fn verify_axioms(&self) -> AxiomReport {
        verify_axioms(&self.coloring)
    }

    /// JSON export: `{n, rank, color_matrix, transpose_map, reflexive_colors, tags}`.
    pub fn export(&self) -> CcExport {
        CcExport {
            n: self.n(),
            rank: self.rank(),
            color_matrix: self.colors().to_vec(),
            transpose_map: self.transpose.clone(),
            reflexive_colors: self.reflexive_colors(),
            tags: self.tags.clone(),
        }
    }

    /// The same configuration with points renamed: point `a` becomes
    /// `perm[a]`. Color names are kept.
    pub fn relabel_points(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let mut colors = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                colors[perm[a] * n + perm[b]] = self.color(a, b);
            }
        }
        Self::trusted(
            PairColoring::from_parts(n, colors, self.rank()),
            self.tags.clone(),
            self.rounds.clone(),
            self.canonical,
        )
    }

    /// The same partition with color `c` renamed `perm[c]`; tags follow.
    pub fn rename_colors(&self, perm: &[u32]) -> Result<Self> {
        let rank = self.rank();
        let mut seen = vec![false; rank];
        if perm.len() != rank
            || perm
                .iter()
                .any(|&c| c as usize >= rank || std::mem::replace(&mut seen[c as usize], true))
        {
            return Err(Error::BadPermutation(format!("{perm:?} is not a permutation of 0..{rank}")));
        }
        let colors = self.colors().iter().map(|&c| perm[c as usize]).collect();
        let tags = self
            .tags
            .iter()
            .map(|(name, cs)| {
                let mut mapped: Vec<u32> = cs.iter().map(|&c| perm[c as usize]).collect();
                mapped.sort_unstable();
                (name.clone(), mapped)
            })
            .collect();
        Ok(Self::trusted(
            PairColoring::from_parts(self.n(), colors, rank),
            tags,
            self.rounds.clone(),
            false,
        ))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CcExport {
    pub n: usize,
    pub rank: usize,
    pub color_matrix: Vec<u32>,
    pub transpose_map: Vec<u32>,
    pub reflexive_colors: Vec<u32>,
    pub tags: BTreeMap<String, Vec<u32>>,
}

/// True iff every class of `coarse` is a union of classes of `fine`.
///
/// Both slices index the same cells. Runs in one pass by mapping each fine
/// color to the unique coarse color that covers it.
pub fn is_coarsening(coarse: &[u32], fine: &[u32]) -> bool {
    first_refinement_violation(coarse, fine).is_none()
}

/// First cell where a fine class straddles two coarse classes.
pub fn first_refinement_violation(coarse: &[u32], fine: &[u32]) -> Option<usize> {
    assert_eq!(coarse.len(), fine.len(), "partitions over different cells");
    let mut cover: rustc_hash::FxHashMap<u32, u32> = Default::default();
    for (cell, (&c, &f)) in coarse.iter().zip(fine).enumerate() {
        match cover.entry(f) {
            std::collections::hash_map::Entry::Occupied(e) if *e.get() != c => return Some(cell),
            std::collections::hash_map::Entry::Occupied(_) => {}
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }
    None
}

/// Same partition, up to renaming of colors.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    is_coarsening(a, b) && is_coarsening(b, a)
}

/// `cc1 ≤ cc2`: every basis relation of `cc1` is a union of basis
/// relations of `cc2`.
pub fn partition_leq(cc1: &CoherentConfiguration, cc2: &CoherentConfiguration) -> Result<bool> {
    if cc1.n() != cc2.n() {
        return Err(Error::PointCountMismatch {
            left: cc1.n(),
            right: cc2.n(),
        });
    }
    Ok(is_coarsening(cc1.colors(), cc2.colors()))
}

/// Equality as partitions of `Ω²`.
pub fn partition_eq(cc1: &CoherentConfiguration, cc2: &CoherentConfiguration) -> Result<bool> {
    Ok(partition_leq(cc1, cc2)? && partition_leq(cc2, cc1)?)
}

/// `WL(X)` with the edge set tagged `"E"`.
pub fn graph_closure(g: &Graph) -> CoherentConfiguration {
    wl_closure(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;

    #[test]
    fn from_colors_rejects_gaps() {
        assert!(PairColoring::from_colors(2, vec![0, 2, 2, 0]).is_err());
        assert!(PairColoring::from_colors(2, vec![0, 1, 1]).is_err());
        let p = PairColoring::normalized(2, &[7, 3, 3, 7]).unwrap();
        assert_eq!(p.colors(), &[0, 1, 1, 0]);
    }

    #[test]
    fn partition_order_examples() {
        let g = named_graph("cycle:5").unwrap();
        let cc = wl_closure(&g);
        assert!(partition_leq(&cc, &cc).unwrap());
        let triv = CoherentConfiguration::trivial(5);
        assert!(partition_leq(&triv, &cc).unwrap());
        assert!(!partition_leq(&cc, &triv).unwrap());
        assert!(partition_leq(&cc, &CoherentConfiguration::discrete(5)).unwrap());
        assert!(matches!(
            partition_leq(&cc, &CoherentConfiguration::trivial(4)),
            Err(Error::PointCountMismatch { .. })
        ));
    }

    #[test]
    fn violation_pinpoints_cell() {
        assert_eq!(first_refinement_violation(&[0, 0, 1, 1], &[0, 0, 1, 2]), None);
        assert_eq!(first_refinement_violation(&[0, 1, 1, 1], &[0, 0, 1, 2]), Some(1));
    }
}
