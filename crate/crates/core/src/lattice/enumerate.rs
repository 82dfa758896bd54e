//! Exhaustive enumeration of lattice vectors inside an `ℓ∞` box.

use super::hnf::hermite_rows;
use crate::{Error, Result};

/// Default cap on the number of enumeration nodes.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// A lattice basis in Hermite form, ready for box enumeration.
#[derive(Clone, Debug)]
pub(crate) struct EchelonBasis {
    rows: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    dim: usize,
}

impl EchelonBasis {
    pub(crate) fn new(basis: &[Vec<i64>]) -> Result<Self> {
        let dim = basis.first().map_or(0, Vec::len);
        let mut rows = basis.to_vec();
        let pivots = hermite_rows(&mut rows, None)?;
        rows.truncate(pivots.len());
        Ok(EchelonBasis { rows, pivots, dim })
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Calls `visit` on every lattice vector `v` with `‖v‖∞ ≤ radius`,
    /// including zero.
    ///
    /// The coefficient of the `k`-th basis row is confined by the pivot
    /// coordinate `p_k`, which only rows `≤ k` touch, so no vector of the box
    /// is missed.
    pub(crate) fn for_each_in_box<F>(&self, radius: i64, budget: u64, mut visit: F) -> Result<()>
    where
        F: FnMut(&[i64]),
    {
        let mut acc = vec![0i64; self.dim];
        let mut nodes = 0u64;
        self.descend(0, radius, &mut acc, &mut nodes, budget, &mut visit)
    }

    fn descend<F>(
        &self,
        level: usize,
        radius: i64,
        acc: &mut Vec<i64>,
        nodes: &mut u64,
        budget: u64,
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&[i64]),
    {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::EnumerationBudget { budget });
        }
        if level == self.rows.len() {
            if acc.iter().all(|x| x.abs() <= radius) {
                visit(acc);
            }
            return Ok(());
        }
        let row = &self.rows[level];
        let p = self.pivots[level];
        let e = row[p];
        let w = acc[p];
        let lo = (-radius - w).div_euclid(e) + i64::from((-radius - w).rem_euclid(e) != 0);
        let hi = (radius - w).div_euclid(e);
        for c in lo..=hi {
            if c != 0 {
                for (a, r) in acc.iter_mut().zip(row) {
                    *a = r
                        .checked_mul(c)
                        .and_then(|x| a.checked_add(x))
                        .ok_or(Error::Overflow)?;
                }
            }
            let res = self.descend(level + 1, radius, acc, nodes, budget, visit);
            if c != 0 {
                for (a, r) in acc.iter_mut().zip(row) {
                    *a -= r * c;
                }
            }
            res?;
        }
        Ok(())
    }
}

/// Shortest nonzero vector in the `ℓ∞` norm, found by enumerating boxes of
/// geometrically growing radius.
///
/// At radius `R` every lattice vector with `‖v‖∞ ≤ R` is visited, so the
/// first radius that contains a nonzero vector certifies the minimum. The
/// radius never exceeds the norm of the shortest basis row.
pub(crate) fn shortest_linf(basis: &EchelonBasis, budget: u64) -> Result<Option<(u64, Vec<i64>)>> {
    if basis.rank() == 0 {
        return Ok(None);
    }
    let cap = basis
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| x.abs()).max().unwrap_or(0))
        .min()
        .unwrap_or(1)
        .max(1);
    let mut radius = 1i64;
    loop {
        let mut best: Option<(u64, Vec<i64>)> = None;
        basis.for_each_in_box(radius, budget, |v| {
            let norm = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
            if norm > 0 && best.as_ref().is_none_or(|(b, _)| norm < *b) {
                best = Some((norm, v.to_vec()));
            }
        })?;
        if best.is_some() {
            return Ok(best);
        }
        if radius >= cap {
            // unreachable: a basis row has norm `cap`
            return Err(Error::EnumerationBudget { budget });
        }
        radius = (radius * 2).min(cap);
    }
}
