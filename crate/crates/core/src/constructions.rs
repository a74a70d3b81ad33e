//! Exponentiation of a family of WL-equivalent coherent configurations by a
//! permutation group, and the tensor decomposition of `WL(X_1 □ ... □ X_n)`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use crate::cc::{
    canonical_signature, partition_eq, partition_leq, tensor_product, verify_witness, wl_closure,
    AlgebraicIsoWitness, CoherentConfiguration, PairColoring,
};
use crate::error::{Error, Result};
use crate::factor::prime_factorize;
use crate::graph::{cartesian_product, transitive_closure, BinaryRelation, Graph};
use crate::kwl::is_two_closed_with_cap;
use crate::union_find::UnionFind;

/// Largest degree accepted by [`enumerate_group`].
pub const MAX_GROUP_DEGREE: usize = 8;

/// Largest tensor rank fused by [`exponentiate`].
pub const MAX_FUSION_COLORS: usize = 1 << 24;

/// Default point cap for checking 2-closedness in
/// [`tensor_decomposition_check`].
pub const DEFAULT_HYPOTHESIS_CAP: usize = 30;

/// A permutation group on `0..degree`, with every element listed.
///
/// A permutation `g` sends `i` to `g[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Vec<usize>>,
    elements: Vec<Vec<usize>>,
}

fn check_permutation(n: usize, p: &[usize]) -> Result<()> {
    if p.len() != n {
        return Err(Error::BadPermutation(format!("{p:?} has length {}, expected {n}", p.len())));
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::BadPermutation(format!("{p:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

fn compose(g: &[usize], h: &[usize]) -> Vec<usize> {
    // g first, then h
    g.iter().map(|&x| h[x]).collect()
}

fn inverse(g: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; g.len()];
    for (i, &x) in g.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// The group generated by `generators`, enumerated by breadth-first search.
pub fn enumerate_group(n: usize, generators: &[Vec<usize>]) -> Result<PermGroup> {
    if n > MAX_GROUP_DEGREE {
        return Err(Error::SizeCap {
            what: "permutation group enumeration".into(),
            size: n,
            cap: MAX_GROUP_DEGREE,
        });
    }
    for g in generators {
        check_permutation(n, g)?;
    }
    let identity: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut elements = Vec::new();
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        if !seen.insert(x.clone()) {
            continue;
        }
        for g in generators {
            let y = compose(&x, g);
            if !seen.contains(&y) {
                queue.push_back(y);
            }
        }
        elements.push(x);
    }
    elements.sort();
    Ok(PermGroup {
        degree: n,
        generators: generators.to_vec(),
        elements,
    })
}

impl PermGroup {
    pub fn trivial(n: usize) -> Result<Self> {
        enumerate_group(n, &[])
    }

    /// `Sym(n)`, generated by a transposition and an `n`-cycle.
    pub fn symmetric(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut t: Vec<usize> = (0..n).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        enumerate_group(n, &gens)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let gens = if n >= 2 {
            vec![(0..n).map(|i| (i + 1) % n).collect()]
        } else {
            Vec::new()
        };
        enumerate_group(n, &gens)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn contains(&self, g: &[usize]) -> bool {
        self.elements.binary_search_by(|e| e.as_slice().cmp(g)).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|g| other.contains(g))
    }
}

/// Configurations `X_1, ..., X_n` with algebraic isomorphisms
/// `φ_ij: X_i → X_j` satisfying `φ_ii = id` and `φ_jk ∘ φ_ij = φ_ik`.
#[derive(Clone, Debug)]
pub struct IsoFamily {
    ccs: Vec<CoherentConfiguration>,
    /// `phi[i][j][c]` is the image of color `c` of `X_i` in `X_j`.
    phi: Vec<Vec<Vec<u32>>>,
}

impl IsoFamily {
    /// Builds the family from `φ_0j` for every `j` (with `φ_00 = id`)
    /// by setting `φ_ij = φ_0j ∘ φ_0i⁻¹`. Every `φ_0j` is verified against
    /// the intersection numbers and the named tags.
    pub fn from_first_row(ccs: Vec<CoherentConfiguration>, row: Vec<Vec<u32>>, tags: &[&str]) -> Result<Self> {
        if ccs.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        if row.len() != ccs.len() {
            return Err(Error::BrokenFamily(format!(
                "{} maps for {} configurations",
                row.len(),
                ccs.len()
            )));
        }
        for (j, map) in row.iter().enumerate() {
            if !verify_witness(&ccs[0], &ccs[j], map, tags)? {
                return Err(Error::NotEquivalent { i: 0, j });
            }
        }
        let inv: Vec<Vec<u32>> = row
            .iter()
            .map(|m| {
                let mut out = vec![0u32; m.len()];
                for (c, &d) in m.iter().enumerate() {
                    out[d as usize] = c as u32;
                }
                out
            })
            .collect();
        let n = ccs.len();
        let phi = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| inv[i].iter().map(|&c| row[j][c as usize]).collect())
                    .collect()
            })
            .collect();
        let family = Self { ccs, phi };
        family.check_cocycle()?;
        Ok(family)
    }

    /// Takes a full matrix of maps and checks every condition.
    pub fn from_matrix(ccs: Vec<CoherentConfiguration>, phi: Vec<Vec<Vec<u32>>>, tags: &[&str]) -> Result<Self> {
        let n = ccs.len();
        if n == 0 {
            return Err(Error::EmptyFactorList);
        }
        if phi.len() != n || phi.iter().any(|r| r.len() != n) {
            return Err(Error::BrokenFamily("map matrix has the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                if !verify_witness(&ccs[i], &ccs[j], &phi[i][j], tags)? {
                    return Err(Error::NotEquivalent { i, j });
                }
            }
        }
        let family = Self { ccs, phi };
        family.check_cocycle()?;
        Ok(family)
    }

    /// Exhaustive check of `φ_ii = id` and `φ_jk ∘ φ_ij = φ_ik`.
    pub fn check_cocycle(&self) -> Result<()> {
        let n = self.ccs.len();
        for i in 0..n {
            if self.phi[i][i].iter().enumerate().any(|(c, &d)| c as u32 != d) {
                return Err(Error::BrokenFamily(format!("φ_{i}{i} is not the identity")));
            }
            for j in 0..n {
                for k in 0..n {
                    let composed = self.phi[i][j].iter().map(|&c| self.phi[j][k][c as usize]);
                    if !composed.eq(self.phi[i][k].iter().copied()) {
                        return Err(Error::BrokenFamily(format!("φ_{j}{k} ∘ φ_{i}{j} ≠ φ_{i}{k}")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.ccs.len()
    }

    pub fn ccs(&self) -> &[CoherentConfiguration] {
        &self.ccs
    }

    pub fn phi(&self, i: usize, j: usize) -> &[u32] {
        &self.phi[i][j]
    }
}

/// The family `{WL(X_i)}` with `φ_0j` the identity on canonical color names.
pub fn build_iso_family(graphs: &[Graph]) -> Result<IsoFamily> {
    if graphs.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    let ccs: Vec<CoherentConfiguration> = graphs.iter().map(wl_closure).collect();
    let first = canonical_signature(&ccs[0])?;
    for (j, cc) in ccs.iter().enumerate().skip(1) {
        if canonical_signature(cc)? != first {
            return Err(Error::NotEquivalent { i: 0, j });
        }
    }
    let identity: Vec<u32> = (0..ccs[0].rank() as u32).collect();
    let row = vec![identity; ccs.len()];
    IsoFamily::from_first_row(ccs, row, &["E"])
}

/// Which permutations of tensor colors drive the orbit fusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fusion {
    Generators,
    Elements,
}

/// `{X_i} ↑ G`: the tensor product fused into orbits of `{φ_g : g ∈ G}`.
pub fn exponentiate(family: &IsoFamily, group: &PermGroup) -> Result<CoherentConfiguration> {
    exponentiate_with(family, group, Fusion::Generators)
}

pub fn exponentiate_with(family: &IsoFamily, group: &PermGroup, fusion: Fusion) -> Result<CoherentConfiguration> {
    let n = family.degree();
    if group.degree() != n {
        return Err(Error::DegreeMismatch {
            family: n,
            group: group.degree(),
        });
    }
    let rank = family.ccs[0].rank();
    let total = (rank as u128).pow(n as u32);
    if total > MAX_FUSION_COLORS as u128 {
        return Err(Error::SizeCap {
            what: "exponentiation".into(),
            size: total.min(usize::MAX as u128) as usize,
            cap: MAX_FUSION_COLORS,
        });
    }
    let total = total as usize;
    let refs: Vec<&CoherentConfiguration> = family.ccs.iter().collect();
    let tensor = tensor_product(&refs)?;
    let perms = match fusion {
        Fusion::Generators => group.generators(),
        Fusion::Elements => group.elements(),
    };
    let mut uf = UnionFind::new(total);
    let mut digits = vec![0usize; n];
    let mut image = vec![0usize; n];
    for g in perms {
        let g_inv = inverse(g);
        for color in 0..total {
            let mut rest = color;
            for d in digits.iter_mut().rev() {
                *d = rest % rank;
                rest /= rank;
            }
            for i in 0..n {
                let j = g_inv[i];
                image[i] = family.phi[j][i][digits[j]] as usize;
            }
            let target = image.iter().fold(0usize, |acc, &d| acc * rank + d);
            uf.union(color, target);
        }
    }
    let labels = uf.labels();
    let fused: Vec<u32> = tensor.colors().iter().map(|&c| labels[c as usize] as u32).collect();
    let coloring = PairColoring::normalized(tensor.n(), &fused)?;
    let mut tags = BTreeMap::new();
    if family.ccs.iter().all(|cc| cc.tags().contains_key("E")) {
        let e = product_edge_relation(&family.ccs)?;
        if let Some(colors) = coloring.colors_covering(&e) {
            tags.insert("E".to_string(), colors);
        }
    }
    CoherentConfiguration::new(coloring, tags).map_err(|e| match e {
        Error::NotCoherent(report) => Error::ExponentiationFailed(report),
        other => other,
    })
}

/// `⋃_i 1 ⊗ ... ⊗ E_i ⊗ ... ⊗ 1` on the product points.
fn product_edge_relation(ccs: &[CoherentConfiguration]) -> Result<BinaryRelation> {
    let graphs = ccs
        .iter()
        .map(|cc| {
            let e = cc.tagged_relation("E")?;
            Graph::from_edges(cc.n(), &e.pairs().filter(|(a, b)| a < b).collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(cartesian_product(&graphs)?.0.edge_relation())
}

/// Indices grouped by pairwise WL-equivalence, with witnesses from the
/// first member of each class.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceClassing {
    pub classes: Vec<Vec<usize>>,
    pub witnesses: Vec<(usize, usize, AlgebraicIsoWitness)>,
}

pub fn wl_equivalence_classes(graphs: &[Graph]) -> Result<EquivalenceClassing> {
    let ccs: Vec<CoherentConfiguration> = graphs.iter().map(wl_closure).collect();
    let sigs = ccs.iter().map(canonical_signature).collect::<Result<Vec<_>>>()?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut witnesses = Vec::new();
    for i in 0..graphs.len() {
        match classes.iter_mut().find(|c| sigs[c[0]] == sigs[i]) {
            Some(class) => {
                let first = class[0];
                let identity: Vec<u32> = (0..ccs[i].rank() as u32).collect();
                let verified = verify_witness(&ccs[first], &ccs[i], &identity, &["E"])?;
                witnesses.push((
                    first,
                    i,
                    AlgebraicIsoWitness {
                        color_bijection: identity,
                        verified,
                    },
                ));
                class.push(i);
            }
            None => classes.push(vec![i]),
        }
    }
    Ok(EquivalenceClassing { classes, witnesses })
}

/// One class `J_k` compared with its exponentiation.
#[derive(Clone, Debug, Serialize)]
pub struct InclusionReport {
    pub class: Vec<usize>,
    /// `WL(X_{J_k}) ≤ {WL(X_j)}_{j ∈ J_k} ↑ Sym(n_k)`.
    pub holds: bool,
    pub strict: bool,
    pub closure_rank: usize,
    pub exponentiation_rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorDecompositionReport {
    pub factor_orders: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
    /// Factor order used to build the product: the classes concatenated.
    pub product_order: Vec<usize>,
    pub points: usize,
    /// Whether `WL(X)` is 2-closed; `None` when `|Ω|` exceeds the cap and
    /// the hypothesis is not established.
    pub hypothesis_2closed: Option<bool>,
    pub tensor_decomposition_holds: bool,
    pub closure_rank: usize,
    pub tensor_rank: usize,
    pub exponentiation_inclusions: Vec<InclusionReport>,
}

fn require_connected_prime(factors: &[Graph]) -> Result<()> {
    if factors.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    for (index, f) in factors.iter().enumerate() {
        let report = prime_factorize(f)?;
        if report.num_factors != 1 {
            return Err(Error::NotPrime {
                index,
                factors: report.num_factors,
            });
        }
    }
    Ok(())
}

fn inclusion(factors: &[Graph], class: &[usize]) -> Result<InclusionReport> {
    let members: Vec<Graph> = class.iter().map(|&j| factors[j].clone()).collect();
    let closure = wl_closure(&cartesian_product(&members)?.0);
    let family = build_iso_family(&members)?;
    let exp = exponentiate(&family, &PermGroup::symmetric(members.len())?)?;
    let holds = partition_leq(&closure, &exp)?;
    Ok(InclusionReport {
        class: class.to_vec(),
        holds,
        strict: holds && !partition_eq(&closure, &exp)?,
        closure_rank: closure.rank(),
        exponentiation_rank: exp.rank(),
    })
}

/// Compares `WL(X_1 □ ... □ X_n)` with `WL(X_{J_1}) ⊗ ... ⊗ WL(X_{J_a})`,
/// where `J_k` are the WL-equivalence classes of the factors, and each
/// `WL(X_{J_k})` with the exponentiation of its class by `Sym(n_k)`.
///
/// Each check is reported on its own; a failing or unchecked hypothesis
/// says nothing about the other fields.
pub fn tensor_decomposition_check(factors: &[Graph], hypothesis_cap: usize) -> Result<TensorDecompositionReport> {
    require_connected_prime(factors)?;
    let classing = wl_equivalence_classes(factors)?;
    let product_order: Vec<usize> = classing.classes.concat();
    let ordered: Vec<Graph> = product_order.iter().map(|&i| factors[i].clone()).collect();
    let (x, _) = cartesian_product(&ordered)?;
    let closure = wl_closure(&x);
    let blocks: Vec<CoherentConfiguration> = classing
        .classes
        .iter()
        .map(|class| {
            let members: Vec<Graph> = class.iter().map(|&j| factors[j].clone()).collect();
            Ok(wl_closure(&cartesian_product(&members)?.0))
        })
        .collect::<Result<_>>()?;
    let tensor = tensor_product(&blocks.iter().collect::<Vec<_>>())?;
    let hypothesis_2closed = if x.n() <= hypothesis_cap {
        Some(is_two_closed_with_cap(&closure, hypothesis_cap)?)
    } else {
        None
    };
    let exponentiation_inclusions = classing
        .classes
        .iter()
        .map(|class| inclusion(factors, class))
        .collect::<Result<_>>()?;
    Ok(TensorDecompositionReport {
        factor_orders: factors.iter().map(Graph::n).collect(),
        classes: classing.classes,
        product_order,
        points: x.n(),
        hypothesis_2closed,
        tensor_decomposition_holds: partition_eq(&closure, &tensor)?,
        closure_rank: closure.rank(),
        tensor_rank: tensor.rank(),
        exponentiation_inclusions,
    })
}

/// Whether every layer partition `⟨c_i⟩` is a parabolic of `WL(X)`, and
/// whether `WL(X)` equals the tensor product of the factor closures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LayerParabolicReport {
    pub layers_parabolic: bool,
    pub tensor_equal: bool,
}

pub fn layer_parabolic_check(factors: &[Graph]) -> Result<LayerParabolicReport> {
    let (x, ps) = cartesian_product(factors)?;
    let closure = wl_closure(&x);
    let identity = BinaryRelation::identity(x.n());
    let layers_parabolic = (0..factors.len()).all(|i| {
        let layer = transitive_closure(&ps.factor_relation(i).union(&identity).expect("same point set"));
        closure.is_relation(&layer)
    });
    let blocks: Vec<CoherentConfiguration> = factors.iter().map(wl_closure).collect();
    let tensor = tensor_product(&blocks.iter().collect::<Vec<_>>())?;
    Ok(LayerParabolicReport {
        layers_parabolic,
        tensor_equal: partition_eq(&closure, &tensor)?,
    })
}

/// `WL(X_1 □ ... □ X_n) ≤ {WL(X_i)} ↑ Sym(n)` for pairwise WL-equivalent
/// connected factors.
pub fn exponentiation_dominates_closure(factors: &[Graph]) -> Result<bool> {
    Ok(exponentiation_probe(factors)?.holds)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentiationProbe {
    pub closure_rank: usize,
    pub exponentiation_rank: usize,
    pub holds: bool,
    pub equality: bool,
}

/// Whether the exponentiation equals the closure of the product on this
/// instance. Experimental: a single outcome, not a general answer.
pub fn probe_exponentiation_equality(factors: &[Graph]) -> Result<ExponentiationProbe> {
    exponentiation_probe(factors)
}

fn exponentiation_probe(factors: &[Graph]) -> Result<ExponentiationProbe> {
    if let Some(index) = factors.iter().position(|f| !f.is_connected()) {
        return Err(Error::Disconnected {
            context: format!("factor {index}"),
        });
    }
    let family = build_iso_family(factors)?;
    let exp = exponentiate(&family, &PermGroup::symmetric(factors.len())?)?;
    let closure = wl_closure(&cartesian_product(factors)?.0);
    let holds = partition_leq(&closure, &exp)?;
    Ok(ExponentiationProbe {
        closure_rank: closure.rank(),
        exponentiation_rank: exp.rank(),
        holds,
        equality: holds && partition_eq(&closure, &exp)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named_graph;

    fn g(spec: &str) -> Graph {
        named_graph(spec).unwrap()
    }

    #[test]
    fn small_groups() {
        assert_eq!(enumerate_group(2, &[vec![1, 0]]).unwrap().order(), 2);
        assert_eq!(enumerate_group(3, &[vec![1, 2, 0]]).unwrap().order(), 3);
        assert_eq!(PermGroup::symmetric(4).unwrap().order(), 24);
        assert_eq!(PermGroup::symmetric(1).unwrap().order(), 1);
        assert_eq!(PermGroup::cyclic(5).unwrap().order(), 5);
        assert!(PermGroup::cyclic(4).unwrap().is_subgroup_of(&PermGroup::symmetric(4).unwrap()));
        assert!(matches!(PermGroup::symmetric(9), Err(Error::SizeCap { .. })));
        assert!(enumerate_group(3, &[vec![0, 0, 1]]).is_err());
    }

    #[test]
    fn groups_are_closed() {
        let a4 = enumerate_group(4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]).unwrap();
        assert_eq!(a4.order(), 12);
        for x in a4.elements() {
            assert!(a4.contains(&inverse(x)));
            for y in a4.elements() {
                assert!(a4.contains(&compose(x, y)));
            }
        }
    }

    #[test]
    fn families() {
        let f = build_iso_family(&[g("complete:4"), g("complete:4")]).unwrap();
        assert_eq!(f.ccs()[0].rank(), 2);
        assert_eq!(f.phi(0, 1), &[0, 1]);
        let f = build_iso_family(&[g("shrikhande"), g("hamming:2,4")]).unwrap();
        assert_eq!(f.ccs()[1].rank(), 3);
        assert!(matches!(
            build_iso_family(&[g("complete:3"), g("complete:4")]),
            Err(Error::NotEquivalent { i: 0, j: 1 })
        ));
    }

    #[test]
    fn broken_cocycle_rejected() {
        let cc = CoherentConfiguration::trivial(3);
        let id = vec![0, 1];
        let ccs = vec![cc.clone(), cc.clone(), cc];
        let mut phi = vec![vec![id.clone(); 3]; 3];
        assert!(IsoFamily::from_matrix(ccs.clone(), phi.clone(), &[]).is_ok());
        phi[0][1] = vec![1, 0];
        assert!(IsoFamily::from_matrix(ccs, phi, &[]).is_err());
    }

    #[test]
    fn hamming_from_complete_graphs() {
        let f = build_iso_family(&[g("complete:4"), g("complete:4")]).unwrap();
        let exp = exponentiate(&f, &PermGroup::symmetric(2).unwrap()).unwrap();
        assert_eq!(exp.rank(), 3);
        assert!(partition_eq(&exp, &wl_closure(&g("hamming:2,4"))).unwrap());
        let f = build_iso_family(&[g("complete:3"), g("complete:3"), g("complete:3")]).unwrap();
        let exp = exponentiate(&f, &PermGroup::symmetric(3).unwrap()).unwrap();
        assert_eq!(exp.rank(), 4);
        assert!(partition_eq(&exp, &wl_closure(&g("hamming:3,3"))).unwrap());
    }

    #[test]
    fn trivial_group_gives_tensor_product() {
        let f = build_iso_family(&[g("cycle:5"), g("cycle:5")]).unwrap();
        let exp = exponentiate(&f, &PermGroup::trivial(2).unwrap()).unwrap();
        let t = tensor_product(&[&f.ccs()[0], &f.ccs()[1]]).unwrap();
        assert!(partition_eq(&exp, &t).unwrap());
    }

    #[test]
    fn generator_and_element_fusion_agree() {
        let f = build_iso_family(&[g("complete:2"), g("complete:2"), g("complete:2")]).unwrap();
        for group in [PermGroup::symmetric(3).unwrap(), PermGroup::cyclic(3).unwrap()] {
            let a = exponentiate_with(&f, &group, Fusion::Generators).unwrap();
            let b = exponentiate_with(&f, &group, Fusion::Elements).unwrap();
            assert_eq!(a.colors(), b.colors());
        }
    }

    #[test]
    fn degree_mismatch() {
        let f = build_iso_family(&[g("complete:2"), g("complete:2")]).unwrap();
        assert!(matches!(
            exponentiate(&f, &PermGroup::symmetric(3).unwrap()),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn classing() {
        let c = wl_equivalence_classes(&[g("complete:3"), g("complete:3"), g("cycle:5")]).unwrap();
        assert_eq!(c.classes, vec![vec![0, 1], vec![2]]);
        assert!(c.witnesses.iter().all(|w| w.2.verified));
        assert_eq!(wl_equivalence_classes(&[g("complete:4")]).unwrap().classes, vec![vec![0]]);
        let c = wl_equivalence_classes(&[g("shrikhande"), g("hamming:2,4"), g("complete:2")]).unwrap();
        assert_eq!(c.classes, vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn decomposition_of_complete_products() {
        let r = tensor_decomposition_check(&[g("complete:3"), g("complete:5")], 30).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert!(r.tensor_decomposition_holds);
        let r = tensor_decomposition_check(&[g("complete:4"), g("complete:4")], 30).unwrap();
        assert_eq!(r.classes, vec![vec![0, 1]]);
        assert!(r.tensor_decomposition_holds);
        assert!(r.exponentiation_inclusions[0].holds);
        assert!(!r.exponentiation_inclusions[0].strict);
        assert_eq!(r.hypothesis_2closed, Some(true));
    }

    #[test]
    fn decomposition_requires_primes() {
        assert!(matches!(
            tensor_decomposition_check(&[g("cycle:4")], 30),
            Err(Error::NotPrime { index: 0, factors: 2 })
        ));
    }

    #[test]
    fn layers_parabolic_iff_tensor() {
        let pos = layer_parabolic_check(&[g("complete:3"), g("complete:5")]).unwrap();
        assert_eq!(pos, LayerParabolicReport { layers_parabolic: true, tensor_equal: true });
        let neg = layer_parabolic_check(&[g("complete:4"), g("complete:4")]).unwrap();
        assert_eq!(neg, LayerParabolicReport { layers_parabolic: false, tensor_equal: false });
    }

    #[test]
    fn exponentiation_dominates() {
        assert!(exponentiation_dominates_closure(&[g("complete:4"), g("complete:4")]).unwrap());
        assert!(exponentiation_dominates_closure(&[g("cycle:5"), g("cycle:5")]).unwrap());
        assert!(exponentiation_dominates_closure(&[g("complete:2")]).unwrap());
        assert!(probe_exponentiation_equality(&[g("complete:4"), g("complete:4")]).unwrap().equality);
        assert!(probe_exponentiation_equality(&[g("complete:2"), g("complete:2")]).unwrap().equality);
    }
}
