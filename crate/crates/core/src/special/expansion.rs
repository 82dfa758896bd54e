use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::constants::{LOG_2PI, ZETA3, ZETA_PRIME_M1, ZETA_PRIME_M2};
use crate::sum::Neumaier;
use crate::{Error, Result};

/// Largest truncation order accepted by [`expansion_coeffs`].
pub const MAX_ORDER: usize = 40;

/// `B_0 … B_n` from `Σ_{j=0}^{m} C(m+1, j) B_j = 0`, so `B_1 = −½`.
pub fn bernoulli_table(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one(); // C(m+1, j)
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli(n: usize) -> BigRational {
    bernoulli_table(n).pop().expect("table has n+1 entries")
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, i| a * BigInt::from(i))
}

/// `ζ(2j) / π^{2j} = (−1)^{j+1} B_{2j} 2^{2j−1} / (2j)!` as a rational;
/// `j = 0` gives `ζ(0) = −½`.
fn zeta_even_over_pi(j: usize, b: &[BigRational]) -> BigRational {
    let sign = if j % 2 == 0 { -1 } else { 1 };
    let two = BigRational::from_integer(BigInt::from(2));
    let pow = if j == 0 {
        BigRational::one() / &two
    } else {
        BigRational::from_integer(BigInt::from(2).pow(2 * j as u32 - 1))
    };
    BigRational::from_integer(BigInt::from(sign)) * &b[2 * j] * pow
        / BigRational::from_integer(factorial(2 * j))
}

/// `ζ(2j)` in double precision.
pub fn zeta_even(j: usize) -> f64 {
    let b = bernoulli_table(2 * j);
    let r = zeta_even_over_pi(j, &b).to_f64().expect("finite");
    r * std::f64::consts::PI.powi(2 * j as i32)
}

/// Coefficients of the expansion of `m(P_d) − m(P_∞)` in `1/d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionCoeffs {
    /// `α_0 … α_K`.
    pub alpha: Vec<f64>,
    /// `B_0 … B_{2K+2}`.
    pub bernoulli: Vec<f64>,
    pub zeta_prime_m1: f64,
    pub zeta_prime_m2: f64,
    pub zeta3: f64,
    pub log_2pi: f64,
    pub order: usize,
}

/// `α_0 = 6(ζ′(−1) − ζ′(−2)) + ½ log 2π − 1` and, for `k ≥ 1`,
/// `α_k = 12(−1)^k/(k(k+1)) Σ_j C(k+1, 2j) (2^{k+1−2j} − 1)(2j − 1)/((2j+1)(2j+2)) B_{2j+2} ζ(2j)`.
///
/// Each term is an exact rational multiple of `π^{2j}`; only that product is
/// rounded.
pub fn expansion_coeffs(order: usize) -> Result<ExpansionCoeffs> {
    if order > MAX_ORDER {
        return Err(Error::precondition(format!(
            "expansion order {order} exceeds {MAX_ORDER}"
        )));
    }
    let b = bernoulli_table(2 * order + 2);
    let mut alpha = Vec::with_capacity(order + 1);
    alpha.push(6.0 * (ZETA_PRIME_M1 - ZETA_PRIME_M2) + 0.5 * LOG_2PI - 1.0);
    for k in 1..=order {
        let mut acc = Neumaier::default();
        for j in 0..=k / 2 {
            let weight = BigRational::new(
                (BigInt::from(2).pow((k + 1 - 2 * j) as u32) - 1) * BigInt::from(2 * j as i64 - 1),
                BigInt::from((2 * j + 1) * (2 * j + 2)),
            );
            let r = BigRational::from_integer(binomial(k + 1, 2 * j))
                * weight
                * &b[2 * j + 2]
                * zeta_even_over_pi(j, &b);
            acc.add(r.to_f64().expect("finite") * std::f64::consts::PI.powi(2 * j as i32));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        alpha.push(sign * 12.0 / (k * (k + 1)) as f64 * acc.value());
    }
    Ok(ExpansionCoeffs {
        alpha,
        bernoulli: b.iter().map(|x| x.to_f64().expect("finite")).collect(),
        zeta_prime_m1: ZETA_PRIME_M1,
        zeta_prime_m2: ZETA_PRIME_M2,
        zeta3: ZETA3,
        log_2pi: LOG_2PI,
        order,
    })
}
