use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{cartesian_product, is_connected, Graph};
use crate::error::{Error, Result};

/// Built-in graph families, addressed on the command line as `name:params`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedGraph {
    Complete(usize),
    Cycle(usize),
    Path(usize),
    Star(usize),
    Hypercube(usize),
    Hamming { d: usize, q: usize },
    Shrikhande,
    RandomConnected { n: usize, seed: u64 },
}

impl std::str::FromStr for NamedGraph {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
        let name = name.trim().to_ascii_lowercase();
        let nums: Vec<&str> = if params.trim().is_empty() {
            Vec::new()
        } else {
            params.split(',').map(str::trim).collect()
        };
        let bad = |reason: &str| Error::InvalidParameter {
            name: spec.to_string(),
            reason: reason.to_string(),
        };
        let want = |k: usize| -> Result<Vec<u64>> {
            if nums.len() != k {
                return Err(bad(&format!("expected {k} parameter(s)")));
            }
            nums.iter()
                .map(|s| s.parse::<u64>().map_err(|_| bad("not an unsigned integer")))
                .collect()
        };
        let g = match name.as_str() {
            "complete" | "k" => NamedGraph::Complete(want(1)?[0] as usize),
            "cycle" | "c" => NamedGraph::Cycle(want(1)?[0] as usize),
            "path" | "p" => NamedGraph::Path(want(1)?[0] as usize),
            "star" => NamedGraph::Star(want(1)?[0] as usize),
            "hypercube" | "q" => NamedGraph::Hypercube(want(1)?[0] as usize),
            "hamming" | "h" => {
                let v = want(2)?;
                NamedGraph::Hamming {
                    d: v[0] as usize,
                    q: v[1] as usize,
                }
            }
            "shrikhande" => {
                want(0)?;
                NamedGraph::Shrikhande
            }
            "random_connected" | "random" => {
                let v = want(2)?;
                NamedGraph::RandomConnected {
                    n: v[0] as usize,
                    seed: v[1],
                }
            }
            _ => return Err(Error::UnknownGraph(spec.to_string())),
        };
        Ok(g)
    }
}

impl NamedGraph {
    pub fn build(&self) -> Result<Graph> {
        let invalid = |reason: &str| Error::InvalidParameter {
            name: format!("{self:?}"),
            reason: reason.to_string(),
        };
        Ok(match *self {
            NamedGraph::Complete(n) => {
                if n == 0 {
                    return Err(invalid("complete graph needs n >= 1"));
                }
                complete(n)
            }
            NamedGraph::Cycle(n) => {
                if n < 3 {
                    return Err(invalid("cycle needs n >= 3"));
                }
                let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                Graph::from_edges(n, &edges)?
            }
            NamedGraph::Path(n) => {
                if n == 0 {
                    return Err(invalid("path needs n >= 1"));
                }
                let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                Graph::from_edges(n, &edges)?
            }
            NamedGraph::Star(k) => {
                let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
                Graph::from_edges(k + 1, &edges)?
            }
            NamedGraph::Hypercube(d) => hamming(d, 2, &invalid)?,
            NamedGraph::Hamming { d, q } => hamming(d, q, &invalid)?,
            NamedGraph::Shrikhande => shrikhande(),
            NamedGraph::RandomConnected { n, seed } => {
                if n == 0 {
                    return Err(invalid("random_connected needs n >= 1"));
                }
                random_connected(n, seed)
            }
        })
    }
}

/// Builds a graph from a `name:params` spec such as `hamming:2,4`.
pub fn named_graph(spec: &str) -> Result<Graph> {
    spec.parse::<NamedGraph>()?.build()
}

fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g.finish();
    g
}

fn hamming(d: usize, q: usize, invalid: &dyn Fn(&str) -> Error) -> Result<Graph> {
    if d == 0 || q == 0 {
        return Err(invalid("hamming needs d >= 1 and q >= 1"));
    }
    let factors = vec![complete(q); d];
    Ok(cartesian_product(&factors)?.0)
}

/// Cayley graph on Z4 × Z4 with connection set {±(1,0), ±(0,1), ±(1,1)};
/// vertex (a, b) has index 4a + b.
fn shrikhande() -> Graph {
    let mut g = Graph::empty(16);
    let steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
    for a in 0..4 {
        for b in 0..4 {
            for (da, db) in steps {
                let (c, d) = ((a + da) % 4, (b + db) % 4);
                g.add_edge(4 * a + b, 4 * c + d);
            }
        }
    }
    g.finish();
    g
}

/// Samples G(n, 1/2) from a ChaCha8 stream seeded with `seed` until the
/// sample is connected.
pub fn random_connected(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.5) {
                    g.add_edge(u, v);
                }
            }
        }
        g.finish();
        if is_connected(&g) {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_2_4_counts() {
        let g = named_graph("hamming:2,4").unwrap();
        assert_eq!((g.n(), g.edge_count()), (16, 48));
        assert!((0..16).all(|v| g.degree(v) == 6));
    }

    #[test]
    fn shrikhande_counts() {
        let g = named_graph("shrikhande").unwrap();
        assert_eq!((g.n(), g.edge_count()), (16, 48));
        assert!((0..16).all(|v| g.degree(v) == 6));
    }

    #[test]
    fn complete_one() {
        let g = named_graph("complete:1").unwrap();
        assert_eq!((g.n(), g.edge_count()), (1, 0));
    }

    #[test]
    fn hypercube_is_hamming_q2() {
        assert_eq!(
            named_graph("hypercube:3").unwrap(),
            named_graph("hamming:3,2").unwrap()
        );
        assert_eq!(named_graph("hypercube:3").unwrap().edge_count(), 12);
    }

    #[test]
    fn random_connected_is_deterministic() {
        let a = named_graph("random_connected:12,99").unwrap();
        let b = random_connected(12, 99);
        assert_eq!(a, b);
        assert!(a.is_connected());
        assert_ne!(random_connected(12, 100), a);
    }

    #[test]
    fn bad_specs() {
        assert!(matches!(named_graph("petersen"), Err(Error::UnknownGraph(_))));
        assert!(matches!(
            named_graph("cycle:2"),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            named_graph("hamming:2"),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            named_graph("complete:x"),
            Err(Error::InvalidParameter { .. })
        ));
    }
}
