use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::PairColoring;

/// How many violations of each kind are kept verbatim.
const KEEP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom")]
pub enum AxiomViolation {
    /// A color meets the diagonal and its complement.
    C1 { color: u32 },
    /// Transposes of one color carry two different colors.
    C2 {
        color: u32,
        transposes: (u32, u32),
    },
    /// `|αr ∩ βs*|` differs between two cells of color `t`.
    C3 {
        r: u32,
        s: u32,
        t: u32,
        cells: ((usize, usize), (usize, usize)),
        counts: (u32, u32),
    },
}

/// Outcome of an exhaustive check of C1, C2 and C3.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub n: usize,
    pub rank: usize,
    pub c1_failures: usize,
    pub c2_failures: usize,
    pub c3_failures: usize,
    /// The first few violations of each kind.
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn is_coherent(&self) -> bool {
        self.c1_failures == 0 && self.c2_failures == 0 && self.c3_failures == 0
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_coherent() {
            return write!(f, "coherent (n = {}, rank = {})", self.n, self.rank);
        }
        write!(
            f,
            "{} C1, {} C2, {} C3 violation(s) (n = {}, rank = {})",
            self.c1_failures, self.c2_failures, self.c3_failures, self.n, self.rank
        )?;
        if let Some(v) = self.violations.first() {
            write!(f, "; first: {v:?}")?;
        }
        Ok(())
    }
}

/// Sorted `(r, s)` keys of the triangles over `(α, β)`, packed as `r·rank + s`.
fn triangle_profile(p: &PairColoring, a: usize, b: usize, out: &mut Vec<u64>) {
    let n = p.n();
    let rank = p.rank() as u64;
    out.clear();
    out.extend((0..n).map(|g| p.color(a, g) as u64 * rank + p.color(g, b) as u64));
    out.sort_unstable();
}

/// First `(r, s)` whose count differs between two sorted profiles.
fn first_difference(x: &[u64], y: &[u64]) -> (u64, u32, u32) {
    let count = |v: &[u64], key: u64| v.iter().filter(|&&k| k == key).count() as u32;
    let mut i = 0;
    while i < x.len() && i < y.len() && x[i] == y[i] {
        i += 1;
    }
    let key = match (x.get(i), y.get(i)) {
        (Some(&a), Some(&b)) => a.min(b),
        (Some(&a), None) => a,
        (None, Some(&b)) => b,
        (None, None) => unreachable!("profiles differ"),
    };
    (key, count(x, key), count(y, key))
}

/// Checks C1, C2 and C3 by direct counting over all cells and all middle
/// points.
pub fn verify_axioms(p: &PairColoring) -> AxiomReport {
    let n = p.n();
    let rank = p.rank();
    let mut report = AxiomReport {
        n,
        rank,
        ..Default::default()
    };

    // C1
    let mut on_diag = vec![false; rank];
    let mut off_diag = vec![false; rank];
    for a in 0..n {
        for b in 0..n {
            let c = p.color(a, b) as usize;
            if a == b {
                on_diag[c] = true;
            } else {
                off_diag[c] = true;
            }
        }
    }
    for c in 0..rank {
        if on_diag[c] && off_diag[c] {
            report.c1_failures += 1;
            if report.c1_failures <= KEEP {
                report.violations.push(AxiomViolation::C1 { color: c as u32 });
            }
        }
    }

    // C2
    let mut transpose = vec![u32::MAX; rank];
    let mut c2_bad = vec![false; rank];
    for a in 0..n {
        for b in 0..n {
            let c = p.color(a, b) as usize;
            let t = p.color(b, a);
            if transpose[c] == u32::MAX {
                transpose[c] = t;
            } else if transpose[c] != t && !c2_bad[c] {
                c2_bad[c] = true;
                report.c2_failures += 1;
                if report.c2_failures <= KEEP {
                    report.violations.push(AxiomViolation::C2 {
                        color: c as u32,
                        transposes: (transpose[c], t),
                    });
                }
            }
        }
    }

    // C3: compare every cell's triangle profile with the first cell of its color.
    let mut rep = vec![usize::MAX; rank];
    for cell in 0..n * n {
        let c = p.colors()[cell] as usize;
        if rep[c] == usize::MAX {
            rep[c] = cell;
        }
    }
    let rep_profiles: Vec<Vec<u64>> = rep
        .par_iter()
        .map(|&cell| {
            let mut v = Vec::with_capacity(n);
            triangle_profile(p, cell / n, cell % n, &mut v);
            v
        })
        .collect();
    let mut bad: Vec<(usize, u64, u32, u32)> = (0..n)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, a| {
                let mut found = Vec::new();
                for b in 0..n {
                    let t = p.color(a, b) as usize;
                    if rep[t] == a * n + b {
                        continue;
                    }
                    triangle_profile(p, a, b, buf);
                    if *buf != rep_profiles[t] {
                        let (key, here, there) = first_difference(&rep_profiles[t], buf);
                        found.push((a * n + b, key, there, here));
                    }
                }
                found
            },
        )
        .flatten()
        .collect();
    bad.sort_unstable_by_key(|x| x.0);
    report.c3_failures = bad.len();
    for &(cell, key, rep_count, count) in bad.iter().take(KEEP) {
        let t = p.colors()[cell];
        let r0 = rep[t as usize];
        report.violations.push(AxiomViolation::C3 {
            r: (key / rank as u64) as u32,
            s: (key % rank as u64) as u32,
            t,
            cells: ((r0 / n, r0 % n), (cell / n, cell % n)),
            counts: (rep_count, count),
        });
    }
    report
}
