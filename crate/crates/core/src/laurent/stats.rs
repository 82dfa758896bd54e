use std::collections::BTreeSet;

use super::LaurentPoly;
use crate::{Error, Result};

/// Scalar invariants of a nonzero Laurent polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyStats {
    /// Number of variables.
    pub n: usize,
    /// Number of nonzero coefficients.
    pub k: usize,
    /// `k_i`: number of distinct exponents of `z_i` in the support, i.e. the
    /// number of nonzero coefficients of `P` viewed as a polynomial in `z_i`.
    pub k_i: Vec<usize>,
    /// `κ = max k_i`.
    pub kappa: usize,
    /// Side of the smallest cube translate `v + [0, d]ⁿ` containing the
    /// Newton polytope.
    pub diam: u64,
    /// Length `L₁`, the sum of coefficient moduli.
    pub l1: f64,
    /// Modulus `L∞`, the largest coefficient modulus.
    pub linf: f64,
}

impl PolyStats {
    pub fn of(p: &LaurentPoly) -> Result<PolyStats> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let n = p.nvars();
        let mut k_i = Vec::with_capacity(n);
        let mut diam = 0u64;
        for i in 0..n {
            let degrees: BTreeSet<i64> = p.terms().map(|(e, _)| e[i]).collect();
            let lo = *degrees.first().expect("nonzero polynomial");
            let hi = *degrees.last().expect("nonzero polynomial");
            diam = diam.max((hi - lo) as u64);
            k_i.push(degrees.len());
        }
        let moduli: Vec<f64> = p.terms().map(|(_, c)| c.norm()).collect();
        Ok(PolyStats {
            n,
            k: p.len(),
            kappa: k_i.iter().copied().max().unwrap_or(1),
            k_i,
            diam,
            l1: crate::sum::neumaier_sum(moduli.iter().copied()),
            linf: moduli.iter().copied().fold(0.0, f64::max),
        })
    }
}
