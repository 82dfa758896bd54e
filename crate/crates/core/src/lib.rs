//! Mahler measures of multivariate Laurent polynomials and their behaviour
//! under monomial substitutions.
//!
//! The crate is organised around a handful of modules:
//!
//! - [`laurent`]: sparse Laurent polynomials, parsing, arithmetic and the
//!   scalar statistics (`k`, `k_i`, `κ`, `diam`, `L₁`, `L∞`) used by the bounds.
//! - [`lattice`]: integer substitution matrices, the kernel lattice `Λ_A`,
//!   its shortest `ℓ∞` vector `ρ(A)` and the substitution `P ↦ P_A`.
//! - [`mahler`]: exact univariate measures (Jensen), iterated torus
//!   quadrature, Monte Carlo and sublevel-set estimates.
//! - [`bounds`]: the explicit constants controlling `|m(P_A) − m(P)|`.
//! - [`special`]: the triangular family `P_d`, its exact dilogarithm
//!   formula and asymptotic expansion.
//! - [`cli`]: the command-line front end and the convergence scan harness.
//!
//! ```
//! use torus_mahler::laurent::LaurentPoly;
//! use torus_mahler::mahler::measure_univariate_exact;
//!
//! let p = LaurentPoly::parse("z1 - 2", 1).unwrap();
//! let m = measure_univariate_exact(&p).unwrap();
//! assert!((m.value - 2f64.ln()).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod cli;
mod error;
pub mod lattice;
pub mod laurent;
pub mod mahler;
pub mod special;
pub(crate) mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
