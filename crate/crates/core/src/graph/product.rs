use super::{BinaryRelation, Graph};
use crate::error::{Error, Result};

/// Coordinate system of a Cartesian product `X_1 □ ... □ X_k`.
///
/// Vertices are numbered row-major over the coordinate tuples, the leftmost
/// factor being most significant.
#[derive(Clone, Debug)]
pub struct ProductStructure {
    factors: Vec<Graph>,
    orders: Vec<usize>,
    strides: Vec<usize>,
    n: usize,
}

impl ProductStructure {
    pub fn new(factors: Vec<Graph>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyFactorList);
        }
        let orders: Vec<usize> = factors.iter().map(Graph::n).collect();
        if let Some(i) = orders.iter().position(|&m| m == 0) {
            return Err(Error::InvalidParameter {
                name: format!("factor {i}"),
                reason: "factor has no vertices".into(),
            });
        }
        let mut strides = vec![1; orders.len()];
        for i in (0..orders.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * orders[i + 1];
        }
        let n = orders.iter().product();
        Ok(Self {
            factors,
            orders,
            strides,
            n,
        })
    }

    pub fn factors(&self) -> &[Graph] {
        &self.factors
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coordinate(&self, v: usize, i: usize) -> usize {
        (v / self.strides[i]) % self.orders[i]
    }

    pub fn coordinates(&self, v: usize) -> Vec<usize> {
        (0..self.orders.len()).map(|i| self.coordinate(v, i)).collect()
    }

    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.strides).map(|(c, s)| c * s).sum()
    }

    /// Factor index of the edge `{u, v}`, or `None` for a non-edge.
    pub fn edge_color(&self, u: usize, v: usize) -> Option<usize> {
        let mut differing = None;
        for i in 0..self.orders.len() {
            let (a, b) = (self.coordinate(u, i), self.coordinate(v, i));
            if a != b {
                if differing.is_some() {
                    return None;
                }
                differing = Some((i, a, b));
            }
        }
        let (i, a, b) = differing?;
        self.factors[i].is_adjacent(a, b).then_some(i)
    }

    /// The relation `c_i`: pairs differing exactly in coordinate `i` by an
    /// edge of factor `i`.
    pub fn factor_relation(&self, i: usize) -> BinaryRelation {
        let mut r = BinaryRelation::empty(self.n);
        let stride = self.strides[i];
        for u in 0..self.n {
            let a = self.coordinate(u, i);
            for &b in self.factors[i].neighbors(a) {
                let v = u - a * stride + b * stride;
                r.insert(u, v);
            }
        }
        r
    }
}

/// The Cartesian product of `factors`, with its coordinate structure.
pub fn cartesian_product(factors: &[Graph]) -> Result<(Graph, ProductStructure)> {
    let ps = ProductStructure::new(factors.to_vec())?;
    let mut g = Graph::empty(ps.n);
    for u in 0..ps.n {
        for (i, factor) in ps.factors.iter().enumerate() {
            let a = ps.coordinate(u, i);
            for &b in factor.neighbors(a) {
                if b > a {
                    g.add_edge(u, u + (b - a) * ps.strides[i]);
                }
            }
        }
    }
    g.finish();
    Ok((g, ps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{graph_isomorphic, named_graph, random_connected};
    use proptest::prelude::*;

    fn k(n: usize) -> Graph {
        named_graph(&format!("complete:{n}")).unwrap()
    }

    #[test]
    fn square_of_k2() {
        let (g, ps) = cartesian_product(&[k(2), k(2)]).unwrap();
        assert!(graph_isomorphic(&g, &named_graph("cycle:4").unwrap()).unwrap());
        // 0=(0,0) 1=(0,1) 2=(1,0) 3=(1,1)
        assert_eq!(ps.edge_color(0, 1), Some(1));
        assert_eq!(ps.edge_color(0, 2), Some(0));
        assert_eq!(ps.edge_color(1, 3), Some(0));
        assert_eq!(ps.edge_color(2, 3), Some(1));
        assert_eq!(ps.edge_color(0, 3), None);
    }

    #[test]
    fn k4_squared_is_hamming() {
        let (g, _) = cartesian_product(&[k(4), k(4)]).unwrap();
        assert_eq!(g, named_graph("hamming:2,4").unwrap());
    }

    #[test]
    fn k3_k5_edge_count() {
        let (g, _) = cartesian_product(&[k(3), k(5)]).unwrap();
        assert_eq!((g.n(), g.edge_count()), (15, 45));
    }

    #[test]
    fn empty_list_rejected() {
        assert!(matches!(cartesian_product(&[]), Err(Error::EmptyFactorList)));
    }

    #[test]
    fn edge_relation_is_union_of_factor_relations() {
        let (g, ps) = cartesian_product(&[k(3), named_graph("path:3").unwrap()]).unwrap();
        let union = ps.factor_relation(0).union(&ps.factor_relation(1)).unwrap();
        assert_eq!(union, g.edge_relation());
    }

    proptest! {
        #[test]
        fn product_edge_count_formula(
            sizes in proptest::collection::vec(1usize..=6, 1..=3),
            seed in any::<u64>(),
        ) {
            let factors: Vec<Graph> = sizes
                .iter()
                .enumerate()
                .map(|(i, &m)| random_connected(m, seed.wrapping_add(i as u64)))
                .collect();
            let (g, ps) = cartesian_product(&factors).unwrap();
            let total: usize = sizes.iter().product();
            prop_assert_eq!(g.n(), total);
            let expected: usize = factors
                .iter()
                .map(|f| f.edge_count() * (total / f.n()))
                .sum();
            prop_assert_eq!(g.edge_count(), expected);
            // coordinates are a bijection and edges match the definition
            let mut seen = std::collections::HashSet::new();
            for v in 0..total {
                let c = ps.coordinates(v);
                prop_assert_eq!(ps.index_of(&c), v);
                prop_assert!(seen.insert(c));
            }
            for u in 0..total {
                for v in 0..total {
                    prop_assert_eq!(g.is_adjacent(u, v), ps.edge_color(u, v).is_some());
                }
            }
        }
    }
}
