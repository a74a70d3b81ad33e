use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CoherentConfiguration;
use crate::error::{Error, Result};

/// Intersection numbers `c_{r,s}^t`, stored per `t` as sorted `(r, s, c)`
/// triples with `c > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntersectionTensor {
    rank: usize,
    by_t: Vec<Vec<(u32, u32, u32)>>,
}

/// One nonzero entry in the sparse export.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TensorEntry {
    pub r: u32,
    pub s: u32,
    pub t: u32,
    pub c: u32,
}

fn count_triangles(cc: &CoherentConfiguration, a: usize, b: usize) -> Vec<(u32, u32, u32)> {
    let mut pairs: Vec<(u32, u32)> = (0..cc.n()).map(|g| (cc.color(a, g), cc.color(g, b))).collect();
    pairs.sort_unstable();
    let mut out: Vec<(u32, u32, u32)> = Vec::new();
    for (r, s) in pairs {
        match out.last_mut() {
            Some(last) if (last.0, last.1) == (r, s) => last.2 += 1,
            _ => out.push((r, s, 1)),
        }
    }
    out
}

fn first_mismatch(x: &[(u32, u32, u32)], y: &[(u32, u32, u32)]) -> (u32, u32) {
    let mut i = 0;
    loop {
        match (x.get(i), y.get(i)) {
            (Some(a), Some(b)) if a == b => i += 1,
            (Some(a), Some(b)) => return (a.0, a.1).min((b.0, b.1)),
            (Some(a), None) | (None, Some(a)) => return (a.0, a.1),
            (None, None) => unreachable!("profiles differ"),
        }
    }
}

impl IntersectionTensor {
    /// Counts from the first cell of each color, then recounts at a second,
    /// pseudo-randomly chosen cell of the same color.
    pub(crate) fn compute(cc: &CoherentConfiguration) -> Result<Self> {
        let n = cc.n();
        let rank = cc.rank();
        let mut cells: Vec<Vec<usize>> = vec![Vec::new(); rank];
        for (cell, &c) in cc.colors().iter().enumerate() {
            cells[c as usize].push(cell);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x1f2e_3d4c_5b6a_7988 ^ rank as u64);
        let mut by_t = Vec::with_capacity(rank);
        for (t, class) in cells.iter().enumerate() {
            let first = class[0];
            let entries = count_triangles(cc, first / n, first % n);
            if class.len() > 1 {
                let other = class[rng.random_range(1..class.len())];
                let check = count_triangles(cc, other / n, other % n);
                if check != entries {
                    let (r, s) = first_mismatch(&entries, &check);
                    return Err(Error::RepresentativeMismatch { r, s, t: t as u32 });
                }
            }
            by_t.push(entries);
        }
        Ok(Self { rank, by_t })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `c_{r,s}^t`.
    pub fn get(&self, r: u32, s: u32, t: u32) -> u32 {
        let row = &self.by_t[t as usize];
        row.binary_search_by(|e| (e.0, e.1).cmp(&(r, s)))
            .map(|i| row[i].2)
            .unwrap_or(0)
    }

    /// Nonzero `(r, s, c)` for fixed `t`.
    pub fn entries_for(&self, t: u32) -> &[(u32, u32, u32)] {
        &self.by_t[t as usize]
    }

    /// All nonzero entries, ordered by `(t, r, s)`.
    pub fn entries(&self) -> impl Iterator<Item = TensorEntry> + '_ {
        self.by_t.iter().enumerate().flat_map(|(t, row)| {
            row.iter().map(move |&(r, s, c)| TensorEntry {
                r,
                s,
                t: t as u32,
                c,
            })
        })
    }

    /// Dense `rank³` table indexed `[(r·rank + s)·rank + t]`.
    pub fn dense(&self) -> Vec<u32> {
        let k = self.rank;
        let mut out = vec![0; k * k * k];
        for e in self.entries() {
            out[(e.r as usize * k + e.s as usize) * k + e.t as usize] = e.c;
        }
        out
    }
}
