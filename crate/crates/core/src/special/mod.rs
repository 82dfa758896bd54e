//! The family `P_d = Σ_{i+j ≤ d} z1^i z2^j`, its limit
//! `P_∞ = (1−z1)(1−z2) − (1−z3)(1−z4)` and the matrices `M_d` linking them.
//!
//! `P_d · (1−z1)(1−z2)(z1−z2) = (P_∞)_{M_d}`, and the extra factors have
//! measure zero, so `m(P_d) = m((P_∞)_{M_d}) → m(P_∞) = −18 ζ′(−2)` with
//! `ρ(M_d) = d + 2`.

mod constants;
mod dilog;
mod expansion;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::lattice::{substitute, SubstMatrix};
use crate::laurent::LaurentPoly;
use crate::mahler::{measure_iterated, MeasureResult};
use crate::sum::Neumaier;
use crate::{Error, Result};

pub use constants::{GLAISHER, LOG_2PI, ZETA3, ZETA_PRIME_M1, ZETA_PRIME_M2};
pub use dilog::bloch_wigner;
pub use expansion::{
    bernoulli, bernoulli_table, expansion_coeffs, zeta_even, ExpansionCoeffs, MAX_ORDER,
};

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

pub fn pd_polynomial(d: u32) -> LaurentPoly {
    let d = i64::from(d);
    let terms = (0..=d).flat_map(|i| (0..=d - i).map(move |j| (vec![i, j], one())));
    LaurentPoly::from_terms(2, terms).expect("two variables")
}

pub fn p_infinity() -> LaurentPoly {
    LaurentPoly::from_terms(
        4,
        [
            (vec![1, 0, 0, 0], -1.0),
            (vec![0, 1, 0, 0], -1.0),
            (vec![1, 1, 0, 0], 1.0),
            (vec![0, 0, 1, 0], 1.0),
            (vec![0, 0, 0, 1], 1.0),
            (vec![0, 0, 1, 1], -1.0),
        ]
        .into_iter()
        .map(|(e, c)| (e, Complex64::new(c, 0.0))),
    )
    .expect("four variables")
}

/// `M_d = [[d+2, 0, 1, 0], [0, 1, 0, d+2]]`.
pub fn md_matrix(d: u32) -> SubstMatrix {
    let e = i64::from(d) + 2;
    SubstMatrix::new(vec![vec![e, 0, 1, 0], vec![0, 1, 0, e]]).expect("2×4 matrix")
}

/// `m(P_∞) = 9ζ(3)/(2π²)`.
pub fn m_p_infinity() -> f64 {
    9.0 * ZETA3 / (2.0 * PI * PI)
}

/// `m(P_d)` in closed form through values of `D` at roots of unity:
///
/// `3/(d+1) Σ_{k=1}^{d+1} (d+2−2k)/(2π) D(e^{2πik/(d+2)})
///  − 3/(d+2) Σ_{k=1}^{d} (d+1−2k)/(2π) D(e^{2πik/(d+1)})`.
pub fn mpd_exact(d: u32) -> Result<f64> {
    if d < 1 {
        return Err(Error::precondition("the closed form needs d ≥ 1"));
    }
    let df = f64::from(d);
    let sum = |count: u32, n: f64| {
        let mut acc = Neumaier::default();
        for k in 1..=count {
            let kf = f64::from(k);
            acc.add((n - 2.0 * kf) / TAU * bloch_wigner(Complex64::cis(TAU * kf / n)));
        }
        acc.value()
    };
    let mut total = Neumaier::default();
    total.add(3.0 / (df + 1.0) * sum(d + 1, df + 2.0));
    total.add(-3.0 / (df + 2.0) * sum(d, df + 1.0));
    Ok(total.value())
}

/// `m(P_∞) + [−½ log d + Σ_{k ≤ K} α_k/d^k] / ((d+1)(d+2))`, with the
/// prefactor kept as written rather than re-expanded in `1/d`.
pub fn mpd_asymptotic(d: u32, order: usize) -> Result<f64> {
    let coeffs = expansion_coeffs(order)?;
    mpd_asymptotic_with(&coeffs, d)
}

/// [`mpd_asymptotic`] with precomputed coefficients.
pub fn mpd_asymptotic_with(coeffs: &ExpansionCoeffs, d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::precondition("the expansion needs d ≥ 2"));
    }
    let df = f64::from(d);
    let mut acc = Neumaier::default();
    acc.add(-0.5 * df.ln());
    let mut pow = 1.0;
    for a in &coeffs.alpha {
        acc.add(a * pow);
        pow /= df;
    }
    Ok(m_p_infinity() + acc.value() / ((df + 1.0) * (df + 2.0)))
}

/// Outcome of [`substitution_identity_check`].
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub d: u32,
    /// Iterated quadrature of `(P_∞)_{M_d}`.
    pub measured: MeasureResult,
    /// [`mpd_exact`]`(d)`.
    pub exact: f64,
}

impl IdentityCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.measured.value - self.exact).abs()
    }
}

/// Checks `P_d·(1−z1)(1−z2)(z1−z2) = (1−z1^{d+2})(1−z2) − (1−z1)(1−z2^{d+2})
/// = (P_∞)_{M_d}` in exact sparse arithmetic, then measures `(P_∞)_{M_d}`
/// by quadrature for comparison with the closed form.
pub fn substitution_identity_check(d: u32, grid: usize) -> Result<IdentityCheck> {
    if d < 1 {
        return Err(Error::precondition("the identity check needs d ≥ 1"));
    }
    let z1 = LaurentPoly::variable(2, 0);
    let z2 = LaurentPoly::variable(2, 1);
    let c1 = LaurentPoly::constant(2, one());
    let a = c1.sub(&z1)?;
    let b = c1.sub(&z2)?;
    let lhs = pd_polynomial(d).mul(&a)?.mul(&b)?.mul(&z1.sub(&z2)?)?;
    let rhs = c1
        .sub(&z1.pow(d + 2))?
        .mul(&b)?
        .sub(&a.mul(&c1.sub(&z2.pow(d + 2))?)?)?;
    if lhs != rhs {
        return Err(Error::IdentityFailed(format!(
            "P_{d}·(1−z1)(1−z2)(z1−z2) differs from the right-hand side"
        )));
    }
    let pa = substitute(&p_infinity(), &md_matrix(d))?;
    if pa != rhs {
        return Err(Error::IdentityFailed(format!(
            "(P_∞) under M_{d} differs from the right-hand side"
        )));
    }
    Ok(IdentityCheck {
        d,
        measured: measure_iterated(&pa, grid)?,
        exact: mpd_exact(d)?,
    })
}
