use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{jensen_measure, MeasureResult, Method};
use crate::laurent::LaurentPoly;
use crate::sum::Neumaier;
use crate::{Error, Result};

/// More than this fraction of skipped fibers aborts the quadrature.
const MAX_DEGENERATE_FRACTION: f64 = 0.01;

/// The variable handled exactly: the one with the most distinct exponents,
/// lowest index on ties.
pub fn inner_variable(p: &LaurentPoly) -> Result<usize> {
    let stats = p.stats()?;
    let mut best = 0;
    for (i, &k) in stats.k_i.iter().enumerate() {
        if k > stats.k_i[best] {
            best = i;
        }
    }
    Ok(best)
}

#[inline]
fn node(j: usize, grid: usize) -> f64 {
    TAU * (j as f64 + 0.5) / grid as f64
}

/// Terms regrouped by their exponent in the inner variable.
struct Fibered {
    len: usize,
    /// (offset into the dense inner array, outer exponents, coefficient)
    terms: Vec<(usize, Vec<i64>, Complex64)>,
    scale: f64,
}

impl Fibered {
    fn new(p: &LaurentPoly, inner: usize) -> Self {
        let lo = p.terms().map(|(e, _)| e[inner]).min().unwrap_or(0);
        let hi = p.terms().map(|(e, _)| e[inner]).max().unwrap_or(0);
        let terms = p
            .terms()
            .map(|(e, c)| {
                let outer: Vec<i64> = e
                    .as_slice()
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != inner)
                    .map(|(_, &k)| k)
                    .collect();
                ((e[inner] - lo) as usize, outer, *c)
            })
            .collect();
        let scale = p.terms().map(|(_, c)| c.norm()).sum();
        Fibered {
            len: (hi - lo) as usize + 1,
            terms,
            scale,
        }
    }

    /// `m` of the fiber over the given outer angles, or `None` when the
    /// fiber polynomial vanishes identically to working precision.
    fn fiber_measure(&self, angles: &[f64], dense: &mut [Complex64]) -> Result<Option<f64>> {
        dense.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
        for (off, outer, c) in &self.terms {
            let phase: f64 = outer.iter().zip(angles).map(|(&k, &t)| k as f64 * t).sum();
            dense[*off] += c * Complex64::cis(phase);
        }
        let tol = 64.0 * f64::EPSILON * self.scale;
        for c in dense.iter_mut() {
            if c.norm() <= tol {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        if dense.iter().all(|c| c.norm() == 0.0) {
            return Ok(None);
        }
        Ok(Some(jensen_measure(dense)?.0))
    }

    /// Mean fiber measure over the midpoint grid in the outer variables.
    /// Returns (mean, skipped, total).
    fn outer_mean(&self, outer_dims: usize, grid: usize) -> Result<(f64, u64, u64)> {
        let slab = |first: usize| -> Result<(Neumaier, u64)> {
            let mut acc = Neumaier::default();
            let mut skipped = 0u64;
            let mut dense = vec![Complex64::new(0.0, 0.0); self.len];
            let rest = outer_dims - 1;
            let count = grid.pow(rest as u32);
            let mut idx = vec![0usize; rest];
            let mut angles = vec![node(first, grid); outer_dims];
            for _ in 0..count {
                for (a, &j) in angles[1..].iter_mut().zip(&idx) {
                    *a = node(j, grid);
                }
                match self.fiber_measure(&angles, &mut dense)? {
                    Some(v) => acc.add(v),
                    None => skipped += 1,
                }
                for j in idx.iter_mut() {
                    *j += 1;
                    if *j < grid {
                        break;
                    }
                    *j = 0;
                }
            }
            Ok((acc, skipped))
        };
        let slabs: Vec<(Neumaier, u64)> =
            (0..grid).into_par_iter().map(slab).collect::<Result<_>>()?;
        let total = (grid as u64).pow(outer_dims as u32);
        let mut acc = Neumaier::default();
        let mut skipped = 0;
        for (s, k) in slabs {
            acc.add(s.value());
            skipped += k;
        }
        if skipped as f64 > MAX_DEGENERATE_FRACTION * total as f64 {
            return Err(Error::DegenerateFibers { skipped, total });
        }
        Ok((acc.value() / (total - skipped) as f64, skipped, total))
    }
}

/// Mahler measure of a polynomial in `n ≥ 2` variables.
///
/// The inner variable is integrated exactly through Jensen's formula at each
/// node of a periodic midpoint grid with `grid` points per outer variable.
/// The error estimate is the change against the half-size grid.
pub fn measure_iterated(p: &LaurentPoly, grid: usize) -> Result<MeasureResult> {
    let n = p.nvars();
    if n < 2 {
        return Err(Error::precondition(
            "iterated quadrature needs at least two variables",
        ));
    }
    if grid < 2 {
        return Err(Error::precondition(
            "quadrature grid needs at least 2 nodes",
        ));
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let inner = inner_variable(p)?;
    let fib = Fibered::new(p, inner);
    let (full, _, total) = fib.outer_mean(n - 1, grid)?;
    let (half, _, _) = fib.outer_mean(n - 1, grid / 2)?;
    Ok(MeasureResult {
        value: full,
        method: Method::IteratedQuadrature,
        error_estimate: (full - half).abs(),
        work: total,
    })
}

/// Tensor midpoint rule for a general periodic integrand on `Tⁿ`.
pub(crate) fn grid_mean<F>(n: usize, grid: usize, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if grid == 0 {
        return Err(Error::precondition("quadrature grid needs nodes"));
    }
    if n == 0 {
        return Ok(f(&[]));
    }
    let slabs: Vec<f64> = (0..grid)
        .into_par_iter()
        .map(|first| {
            let rest = n - 1;
            let mut acc = Neumaier::default();
            let mut idx = vec![0usize; rest];
            let mut angles = vec![node(first, grid); n];
            for _ in 0..grid.pow(rest as u32) {
                for (a, &j) in angles[1..].iter_mut().zip(&idx) {
                    *a = node(j, grid);
                }
                acc.add(f(&angles));
                for j in idx.iter_mut() {
                    *j += 1;
                    if *j < grid {
                        break;
                    }
                    *j = 0;
                }
            }
            acc.value()
        })
        .collect();
    let total = (grid as f64).powi(n as i32);
    Ok(crate::sum::neumaier_sum(slabs) / total)
}
