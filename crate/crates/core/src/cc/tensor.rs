use std::collections::BTreeMap;

use super::{CoherentConfiguration, PairColoring};
use crate::error::{Error, Result};

/// `X_1 ⊗ ... ⊗ X_k` on the row-major product point set.
///
/// The color of a cell is the mixed-radix number of its factor colors, the
/// first factor most significant, so `rank = Π rank_i`.
pub fn tensor_product(ccs: &[&CoherentConfiguration]) -> Result<CoherentConfiguration> {
    if ccs.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    let orders: Vec<usize> = ccs.iter().map(|c| c.n()).collect();
    let ranks: Vec<usize> = ccs.iter().map(|c| c.rank()).collect();
    let n: usize = orders.iter().product();
    let rank: usize = ranks.iter().product();
    if rank > u32::MAX as usize {
        return Err(Error::SizeCap {
            what: "tensor product".into(),
            size: rank,
            cap: u32::MAX as usize,
        });
    }
    let k = ccs.len();
    // coordinates of every point
    let mut coords = vec![0usize; n * k];
    for p in 0..n {
        let mut rest = p;
        for i in (0..k).rev() {
            coords[p * k + i] = rest % orders[i];
            rest /= orders[i];
        }
    }
    let mut colors = vec![0u32; n * n];
    for a in 0..n {
        let ca = &coords[a * k..(a + 1) * k];
        for b in 0..n {
            let cb = &coords[b * k..(b + 1) * k];
            let mut c = 0usize;
            for i in 0..k {
                c = c * ranks[i] + ccs[i].color(ca[i], cb[i]) as usize;
            }
            colors[a * n + b] = c as u32;
        }
    }
    Ok(CoherentConfiguration::trusted(
        PairColoring::from_parts(n, colors, rank),
        BTreeMap::new(),
        Vec::new(),
        false,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cc::{coherent_closure, partition_eq, wl_closure};
    use crate::graph::{cartesian_product, named_graph};
    use proptest::prelude::*;

    #[test]
    fn trivial_times_trivial() {
        let a = coherent_closure(3, &[]).unwrap();
        let b = coherent_closure(5, &[]).unwrap();
        let t = tensor_product(&[&a, &b]).unwrap();
        assert_eq!((t.n(), t.rank()), (15, 4));
        assert!(t.verify_axioms().is_coherent());
    }

    #[test]
    fn complete_graphs_of_different_orders() {
        let k3 = named_graph("complete:3").unwrap();
        let k5 = named_graph("complete:5").unwrap();
        let (g, _) = cartesian_product(&[k3.clone(), k5.clone()]).unwrap();
        let t = tensor_product(&[&wl_closure(&k3), &wl_closure(&k5)]).unwrap();
        assert!(partition_eq(&wl_closure(&g), &t).unwrap());
    }

    #[test]
    fn equal_complete_graphs_fuse() {
        let k4 = wl_closure(&named_graph("complete:4").unwrap());
        let t = tensor_product(&[&k4, &k4]).unwrap();
        let h = wl_closure(&named_graph("hamming:2,4").unwrap());
        assert_eq!((t.rank(), h.rank()), (4, 3));
        assert!(!partition_eq(&t, &h).unwrap());
    }

    proptest! {
        #[test]
        fn rank_multiplies_and_numbers_factor(
            n1 in 2usize..=5, n2 in 2usize..=4, s1 in any::<u64>(), s2 in any::<u64>(),
        ) {
            let a = wl_closure(&crate::graph::random_connected(n1, s1));
            let b = wl_closure(&crate::graph::random_connected(n2, s2));
            let t = tensor_product(&[&a, &b]).unwrap();
            prop_assert_eq!(t.rank(), a.rank() * b.rank());
            prop_assert!(t.verify_axioms().is_coherent());
            let ta = a.intersection_numbers().unwrap();
            let tb = b.intersection_numbers().unwrap();
            let tt = t.intersection_numbers().unwrap();
            let rb = b.rank() as u32;
            for e in tt.entries() {
                let (r1, r2) = (e.r / rb, e.r % rb);
                let (s1, s2) = (e.s / rb, e.s % rb);
                let (t1, t2) = (e.t / rb, e.t % rb);
                prop_assert_eq!(e.c, ta.get(r1, s1, t1) * tb.get(r2, s2, t2));
            }
            // and every product of nonzero factor numbers appears
            let count: usize = (0..a.rank() as u32)
                .map(|t1| ta.entries_for(t1).len())
                .sum::<usize>()
                * (0..b.rank() as u32).map(|t2| tb.entries_for(t2).len()).sum::<usize>();
            prop_assert_eq!(tt.entries().count(), count);
        }
    }
}
