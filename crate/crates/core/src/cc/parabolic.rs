use serde::Serialize;

use super::CoherentConfiguration;
use crate::error::{Error, Result};
use crate::graph::BinaryRelation;
use crate::union_find::UnionFind;

/// An equivalence relation on a subset `Δ` of the points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialParabolic {
    n: usize,
    support: Vec<usize>,
    class_of: Vec<Option<u32>>,
    classes: Vec<Vec<usize>>,
}

impl PartialParabolic {
    /// Builds from disjoint non-empty classes; classes are renumbered by
    /// their smallest point.
    pub fn from_classes(n: usize, classes: Vec<Vec<usize>>) -> Result<Self> {
        let mut classes: Vec<Vec<usize>> = classes
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        if classes.iter().any(Vec::is_empty) {
            return Err(Error::NotPartialParabolic("empty class".into()));
        }
        classes.sort_unstable_by_key(|c| c[0]);
        let mut class_of = vec![None; n];
        for (i, class) in classes.iter().enumerate() {
            for &a in class {
                if a >= n {
                    return Err(Error::NotPartialParabolic(format!("point {a} out of range")));
                }
                if class_of[a].replace(i as u32).is_some() {
                    return Err(Error::NotPartialParabolic(format!("point {a} in two classes")));
                }
            }
        }
        let support = (0..n).filter(|&a| class_of[a].is_some()).collect();
        Ok(Self {
            n,
            support,
            class_of,
            classes,
        })
    }

    /// Reads an equivalence relation on its support.
    pub fn from_relation(r: &BinaryRelation) -> Result<Self> {
        let n = r.n();
        let support: Vec<usize> = (0..n).filter(|&a| r.contains(a, a)).collect();
        let mut uf = UnionFind::new(n);
        for (a, b) in r.pairs() {
            if !r.contains(a, a) || !r.contains(b, b) {
                return Err(Error::NotPartialParabolic(format!(
                    "pair ({a}, {b}) leaves the reflexive support"
                )));
            }
            uf.union(a, b);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &a in &support {
            groups.entry(uf.find(a)).or_default().push(a);
        }
        let pp = Self::from_classes(n, groups.into_values().collect())?;
        if pp.relation() != *r {
            return Err(Error::NotPartialParabolic("relation is not transitive".into()));
        }
        Ok(pp)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn class_of(&self, a: usize) -> Option<u32> {
        self.class_of[a]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// `⋃_Λ Λ × Λ`.
    pub fn relation(&self) -> BinaryRelation {
        let n = self.n;
        BinaryRelation::from_cell_predicate(n, |cell| {
            let (a, b) = (self.class_of[cell / n], self.class_of[cell % n]);
            a.is_some() && a == b
        })
    }
}

/// The equivalence closure of `r` on its support.
///
/// `r` must be a union of colors of `cc`; the closure is checked to be one
/// as well.
pub fn equivalence_closure(cc: &CoherentConfiguration, r: &BinaryRelation) -> Result<PartialParabolic> {
    if r.n() != cc.n() {
        return Err(Error::PointCountMismatch {
            left: cc.n(),
            right: r.n(),
        });
    }
    if !cc.is_relation(r) {
        return Err(Error::NotColorExact {
            context: "equivalence closure input".into(),
        });
    }
    let n = r.n();
    let support = r.support();
    let mut uf = UnionFind::new(n);
    for (a, b) in r.pairs() {
        uf.union(a, b);
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &a in &support {
        groups.entry(uf.find(a)).or_default().push(a);
    }
    let pp = PartialParabolic::from_classes(n, groups.into_values().collect())?;
    if !cc.is_relation(&pp.relation()) {
        return Err(Error::NotColorExact {
            context: "equivalence closure output".into(),
        });
    }
    Ok(pp)
}

/// True iff `e` covers every point and is a union of colors of `cc`.
pub fn is_parabolic(cc: &CoherentConfiguration, e: &PartialParabolic) -> bool {
    e.n() == cc.n() && e.support().len() == cc.n() && cc.is_relation(&e.relation())
}

/// Splits `e` into indecomposable partial parabolics: two classes are
/// linked when one color inside `e` meets both class squares.
pub fn indecomposable_components(
    cc: &CoherentConfiguration,
    e: &PartialParabolic,
) -> Result<Vec<PartialParabolic>> {
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
    let k = e.class_count();
    let mut first_class: Vec<Option<u32>> = vec![None; cc.rank()];
    let mut uf = UnionFind::new(k);
    for class in e.classes() {
        let ci = e.class_of(class[0]).expect("class member");
        for &a in class {
            for &b in class {
                let c = cc.color(a, b) as usize;
                match first_class[c] {
                    None => first_class[c] = Some(ci),
                    Some(other) => {
                        uf.union(other as usize, ci as usize);
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Vec<usize>>> = Default::default();
    for ci in 0..k {
        groups.entry(uf.find(ci)).or_default().push(e.classes()[ci].clone());
    }
    let mut parts: Vec<Vec<Vec<usize>>> = groups.into_values().collect();
    parts.sort_unstable_by_key(|p| p[0][0]);
    parts
        .into_iter()
        .map(|classes| PartialParabolic::from_classes(e.n(), classes))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::{coherent_closure, tensor_product, wl_closure};
    use crate::graph::{cartesian_product, named_graph};

    #[test]
    fn edge_closure_of_connected_graph() {
        let g = named_graph("cycle:6").unwrap();
        let cc = wl_closure(&g);
        let e = equivalence_closure(&cc, &g.edge_relation()).unwrap();
        assert_eq!(e.class_count(), 1);
        assert!(is_parabolic(&cc, &e));
    }

    #[test]
    fn factor_parabolic_of_k3_k5() {
        let (g, ps) = cartesian_product(&[
            named_graph("complete:3").unwrap(),
            named_graph("complete:5").unwrap(),
        ])
        .unwrap();
        let cc = wl_closure(&g);
        let e = equivalence_closure(&cc, &ps.factor_relation(0)).unwrap();
        assert_eq!(e.class_count(), 5);
        assert!(e.classes().iter().all(|c| c.len() == 3));
        assert!(is_parabolic(&cc, &e));
    }

    #[test]
    fn factor_relation_of_hamming_is_not_exact() {
        let (g, ps) = cartesian_product(&[
            named_graph("complete:4").unwrap(),
            named_graph("complete:4").unwrap(),
        ])
        .unwrap();
        let cc = wl_closure(&g);
        let c1 = ps.factor_relation(0);
        assert!(matches!(
            equivalence_closure(&cc, &c1),
            Err(Error::NotColorExact { .. })
        ));
        let grouped = PartialParabolic::from_relation(&crate::graph::transitive_closure(&c1)).unwrap();
        assert!(!is_parabolic(&cc, &grouped));
    }

    #[test]
    fn diagonal_and_full() {
        let cc = wl_closure(&named_graph("cycle:5").unwrap());
        let diag = equivalence_closure(&cc, &BinaryRelation::identity(5)).unwrap();
        assert_eq!(diag.class_count(), 5);
        let full = PartialParabolic::from_classes(5, vec![(0..5).collect()]).unwrap();
        assert!(is_parabolic(&cc, &full));
    }

    #[test]
    fn from_relation_rejects_non_equivalences() {
        let r = BinaryRelation::from_pairs(3, [(0, 0), (1, 1), (0, 1)]);
        assert!(PartialParabolic::from_relation(&r).is_err());
        let r = BinaryRelation::from_pairs(3, [(0, 0), (1, 1), (0, 1), (1, 0)]);
        let pp = PartialParabolic::from_relation(&r).unwrap();
        assert_eq!(pp.support(), &[0, 1]);
    }

    #[test]
    fn single_class_is_one_component() {
        let cc = coherent_closure(4, &[]).unwrap();
        let e = PartialParabolic::from_classes(4, vec![vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(indecomposable_components(&cc, &e).unwrap().len(), 1);
    }

    #[test]
    fn components_split_by_factor() {
        let a = wl_closure(&named_graph("complete:3").unwrap());
        let b = wl_closure(&named_graph("path:3").unwrap());
        let t = tensor_product(&[&a, &b]).unwrap();
        // one class {(x, y) : x ∈ Ω_1} per point y of the path
        let classes: Vec<Vec<usize>> = (0..3).map(|y| (0..3).map(|x| 3 * x + y).collect()).collect();
        let e = PartialParabolic::from_classes(9, classes).unwrap();
        let comps = indecomposable_components(&t, &e).unwrap();
        // the ends share a fiber, so classes y = 0 and y = 2 link
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].classes().len(), 2);
        assert_eq!(comps[1].classes(), &[vec![1, 4, 7]]);
    }

    #[test]
    fn components_reject_non_parabolic() {
        let cc = wl_closure(&named_graph("path:3").unwrap());
        let e = PartialParabolic::from_classes(3, vec![vec![0, 1]]).unwrap();
        assert!(indecomposable_components(&cc, &e).is_err());
    }
}
