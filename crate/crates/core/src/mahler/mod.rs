//! Logarithmic Mahler measures and other integrals over the unit torus.
//!
//! `m(P) = ∫_{Tⁿ} log|P| dμₙ`. In one variable Jensen's formula gives
//! `m(P) = log|a_lead| + Σ log max(|α_j|, 1)` exactly. In several variables
//! the innermost variable is still handled by Jensen at every node of a
//! periodic grid over the outer variables, which absorbs the logarithmic
//! singularities along the zero set.

mod montecarlo;
mod quadrature;
mod roots;

use std::fmt;

use num_complex::Complex64;

use crate::lattice::{substitute, SubstMatrix};
use crate::laurent::LaurentPoly;
use crate::{Error, Result};

pub use montecarlo::{measure_mc, sublevel_measure, SublevelEstimate};
pub use quadrature::{inner_variable, measure_iterated};
pub use roots::polynomial_roots;

/// Roots within this distance of the unit circle contribute nothing.
pub const UNIT_CIRCLE_CLAMP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    UnivariateExact,
    IteratedQuadrature,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::UnivariateExact => "univariate-exact",
            Method::IteratedQuadrature => "iterated-quadrature",
            Method::MonteCarlo => "monte-carlo",
        })
    }
}

/// A logarithmic Mahler measure (in nats) with the method that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub method: Method,
    pub error_estimate: f64,
    /// Root count, grid nodes or samples, depending on the method.
    pub work: u64,
}

/// `log|c_lead| + Σ log max(|α|, 1)` for dense ascending coefficients.
///
/// Leading and trailing exact zeros are stripped; a trailing zero block is a
/// monomial factor and contributes nothing.
pub fn jensen_measure(coeffs: &[Complex64]) -> Result<(f64, usize)> {
    let zero = Complex64::new(0.0, 0.0);
    let lo = coeffs
        .iter()
        .position(|c| *c != zero)
        .ok_or(Error::ZeroPolynomial)?;
    let hi = coeffs.iter().rposition(|c| *c != zero).expect("nonzero");
    let core = &coeffs[lo..=hi];
    let roots = polynomial_roots(core)?;
    let mut acc = crate::sum::Neumaier::default();
    acc.add(core[core.len() - 1].norm().ln());
    for r in &roots {
        let a = r.norm();
        if a > 1.0 + UNIT_CIRCLE_CLAMP {
            acc.add(a.ln());
        }
    }
    Ok((acc.value(), roots.len()))
}

/// Exact measure of a univariate Laurent polynomial through its roots.
pub fn measure_univariate_exact(p: &LaurentPoly) -> Result<MeasureResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (_, dense) = p.univariate_coeffs()?;
    let (value, nroots) = jensen_measure(&dense)?;
    Ok(MeasureResult {
        value,
        method: Method::UnivariateExact,
        error_estimate: 64.0 * f64::EPSILON * (nroots as f64 + 1.0),
        work: nroots as u64,
    })
}

/// Exact in one variable, iterated quadrature otherwise.
pub fn measure(p: &LaurentPoly, grid: usize) -> Result<MeasureResult> {
    if p.nvars() == 1 {
        measure_univariate_exact(p)
    } else {
        measure_iterated(p, grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegrandKind {
    /// `log|P|`.
    LogAbs,
    /// `(log|P|)²`.
    LogAbsSquared,
    /// `½ log(|P|² + ε)`.
    Regularized(f64),
    /// Indicator of `|P| ≤ r`.
    IndicatorBelow(f64),
}

/// A function on the torus built from a Laurent polynomial.
#[derive(Clone, Debug)]
pub struct TorusIntegrand {
    kind: IntegrandKind,
    target: LaurentPoly,
}

impl TorusIntegrand {
    pub fn new(kind: IntegrandKind, target: LaurentPoly) -> Result<Self> {
        match kind {
            IntegrandKind::Regularized(eps) if !(eps > 0.0) => {
                return Err(Error::precondition("regularisation needs ε > 0"))
            }
            IntegrandKind::IndicatorBelow(r) if !(r >= 0.0) => {
                return Err(Error::precondition("sublevel threshold needs r ≥ 0"))
            }
            _ => {}
        }
        Ok(TorusIntegrand { kind, target })
    }

    pub fn kind(&self) -> IntegrandKind {
        self.kind
    }

    pub fn target(&self) -> &LaurentPoly {
        &self.target
    }

    fn value_at(&self, p: &LaurentPoly, angles: &[f64]) -> f64 {
        let v = p.eval_torus(angles).expect("dimension checked").norm();
        match self.kind {
            IntegrandKind::LogAbs => v.ln(),
            IntegrandKind::LogAbsSquared => v.ln().powi(2),
            IntegrandKind::Regularized(eps) => 0.5 * (v * v + eps).ln(),
            IntegrandKind::IndicatorBelow(r) => f64::from(u8::from(v <= r)),
        }
    }
}

/// How an integral over the torus is discretised.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Periodic midpoint rule with `grid` nodes per dimension (exact
    /// innermost variable for `LogAbs`).
    Quadrature {
        grid: usize,
    },
    MonteCarlo {
        samples: usize,
        seed: u64,
    },
}

/// `∫ f dμ_A`, computed as the integral of `f(z^A)` over `T^m`. With
/// `a = None` this is the plain Haar integral.
pub fn integrate(f: &TorusIntegrand, a: Option<&SubstMatrix>, rule: Rule) -> Result<f64> {
    let p = match a {
        Some(a) => {
            let pa = substitute(&f.target, a)?;
            if pa.is_zero() && !f.target.is_zero() {
                return Err(Error::VanishingSubstitution);
            }
            pa
        }
        None => f.target.clone(),
    };
    if p.is_zero() && matches!(f.kind, IntegrandKind::LogAbs | IntegrandKind::LogAbsSquared) {
        return Err(Error::ZeroPolynomial);
    }
    match (f.kind, rule) {
        (IntegrandKind::LogAbs, Rule::Quadrature { grid }) => Ok(measure(&p, grid)?.value),
        (IntegrandKind::LogAbs, Rule::MonteCarlo { samples, seed }) => {
            Ok(measure_mc(&p, samples, seed)?.value)
        }
        (_, Rule::Quadrature { grid }) => {
            quadrature::grid_mean(p.nvars(), grid, |t| f.value_at(&p, t))
        }
        (_, Rule::MonteCarlo { samples, seed }) => {
            let s = montecarlo::sample_mean(p.nvars(), samples, seed, |t| Some(f.value_at(&p, t)));
            Ok(s.mean)
        }
    }
}
