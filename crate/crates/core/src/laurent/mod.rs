//! Sparse Laurent polynomials in `n` variables with complex coefficients.
//!
//! A [`LaurentPoly`] stores a map from exponent vectors to nonzero
//! coefficients. Exponent vectors are ordered lexicographically, which fixes
//! the printing order and makes equality structural.

mod parse;
mod stats;

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::sum::neumaier_sum;
use crate::{Error, Result};

pub use stats::PolyStats;

/// An exponent vector `v ∈ ℤⁿ`, so that `z^v = z₁^{v₁} ⋯ zₙ^{vₙ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<i64>);

impl ExponentVector {
    pub fn new(entries: Vec<i64>) -> Self {
        ExponentVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn linf(&self) -> u64 {
        self.0.iter().map(|e| e.unsigned_abs()).max().unwrap_or(0)
    }

    fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn neg(&self) -> ExponentVector {
        ExponentVector(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for ExponentVector {
    fn from(v: Vec<i64>) -> Self {
        ExponentVector(v)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

/// A Laurent polynomial `P(z) = Σ c_v z^v` in canonical sparse form.
///
/// No stored coefficient is exactly zero and every exponent vector has
/// length [`nvars`](Self::nvars). The zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<ExponentVector, Complex64>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(ExponentVector::zeros(nvars), c);
        p
    }

    /// The single-term polynomial `c · z^v`.
    pub fn monomial(exponents: Vec<i64>, c: Complex64) -> Self {
        let mut p = Self::zero(exponents.len());
        p.add_term(ExponentVector(exponents), c);
        p
    }

    /// `z_i` for a zero-based variable index `i`.
    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Complex64::new(1.0, 0.0))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut grouped: BTreeMap<ExponentVector, Vec<Complex64>> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            grouped.entry(ExponentVector(e)).or_default().push(c);
        }
        Ok(Self::from_groups(nvars, grouped))
    }

    /// Sums each group with compensated summation and drops zeros.
    pub(crate) fn from_groups(
        nvars: usize,
        grouped: BTreeMap<ExponentVector, Vec<Complex64>>,
    ) -> Self {
        let terms = grouped
            .into_iter()
            .filter_map(|(e, cs)| {
                let c = if cs.len() == 1 {
                    cs[0]
                } else {
                    Complex64::new(
                        neumaier_sum(cs.iter().map(|c| c.re)),
                        neumaier_sum(cs.iter().map(|c| c.im)),
                    )
                };
                (c != Complex64::new(0.0, 0.0)).then_some((e, c))
            })
            .collect();
        LaurentPoly { nvars, terms }
    }

    /// Parses the polynomial grammar, e.g. `"(1-z1)*(1-z2) - 2*z3^-1"`.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        parse::parse(text, nvars)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Number of nonzero coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> impl ExactSizeIterator<Item = (&ExponentVector, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[i64]) -> Complex64 {
        self.terms
            .get(&ExponentVector(exponents.to_vec()))
            .copied()
            .unwrap_or_default()
    }

    /// The constant term `c_0(P)`.
    pub fn constant_term(&self) -> Complex64 {
        self.coeff(&vec![0; self.nvars])
    }

    fn add_term(&mut self, e: ExponentVector, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == Complex64::new(0.0, 0.0) {
                    o.remove();
                }
            }
        }
    }

    fn check_same_vars(&self, other: &LaurentPoly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same_vars(other)?;
        let mut grouped: BTreeMap<ExponentVector, Vec<Complex64>> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            grouped.entry(e.clone()).or_default().push(*c);
        }
        Ok(Self::from_groups(self.nvars, grouped))
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> LaurentPoly {
        let grouped = self
            .terms
            .iter()
            .map(|(e, v)| (e.clone(), vec![v * c]))
            .collect();
        Self::from_groups(self.nvars, grouped)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        self.check_same_vars(other)?;
        let mut grouped: BTreeMap<ExponentVector, Vec<Complex64>> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                grouped.entry(e1.add(e2)).or_default().push(c1 * c2);
            }
        }
        Ok(Self::from_groups(self.nvars, grouped))
    }

    /// `P^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::constant(self.nvars, Complex64::new(1.0, 0.0));
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same variable count");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same variable count");
            }
        }
        acc
    }

    /// The conjugate reciprocal `P*(z) = Σ conj(c_v) z^{−v}`. On the unit
    /// torus `P · P* = |P|²`.
    pub fn conj_reciprocal(&self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.neg(), c.conj()))
                .collect(),
        }
    }

    /// Evaluates `P` at a point of `(ℂ^×)ⁿ`.
    ///
    /// Powers are cached per variable, so the cost is linear in the number
    /// of terms plus the exponent range of each variable.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: point.len(),
            });
        }
        let cache = PowerCache::new(self, point)?;
        Ok(self.eval_cached(&cache))
    }

    fn eval_cached(&self, cache: &PowerCache) -> Complex64 {
        let mut re = crate::sum::Neumaier::default();
        let mut im = crate::sum::Neumaier::default();
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.0.iter().enumerate() {
                t *= cache.get(i, k);
            }
            re.add(t.re);
            im.add(t.im);
        }
        Complex64::new(re.value(), im.value())
    }

    /// Evaluates at `(e^{iθ₁}, …, e^{iθₙ})`.
    pub fn eval_torus(&self, angles: &[f64]) -> Result<Complex64> {
        let point: Vec<Complex64> = angles.iter().map(|&t| Complex64::cis(t)).collect();
        self.eval(&point)
    }

    /// Multiplies by the monomial `z^shift`.
    pub fn shift(&self, shift: &[i64]) -> Result<LaurentPoly> {
        if shift.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: shift.len(),
            });
        }
        let s = ExponentVector(shift.to_vec());
        Ok(LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.add(&s), *c)).collect(),
        })
    }

    pub fn stats(&self) -> Result<PolyStats> {
        PolyStats::of(self)
    }

    /// Dense ascending coefficients of a univariate polynomial after
    /// dividing out the lowest power of `z1`, together with that power.
    pub fn univariate_coeffs(&self) -> Result<(i64, Vec<Complex64>)> {
        if self.nvars != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.nvars,
            });
        }
        let (lo, hi) = match (self.terms.keys().next(), self.terms.keys().last()) {
            (Some(lo), Some(hi)) => (lo[0], hi[0]),
            _ => return Err(Error::ZeroPolynomial),
        };
        let mut dense = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize + 1];
        for (e, c) in &self.terms {
            dense[(e[0] - lo) as usize] = *c;
        }
        Ok((lo, dense))
    }

    /// Serialises to the sparse interchange document
    /// `{"n": .., "terms": [{"e": [..], "c": [re, im]}, ..]}`.
    pub fn to_sparse_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&SparseDoc::from(self))?)
    }

    pub fn from_sparse_json(text: &str) -> Result<LaurentPoly> {
        let doc: SparseDoc = serde_json::from_str(text)?;
        doc.try_into()
    }
}

/// Per-variable cache of `z_i^k` over the exponent range present in `P`.
pub(crate) struct PowerCache {
    lo: Vec<i64>,
    powers: Vec<Vec<Complex64>>,
}

impl PowerCache {
    pub(crate) fn new(p: &LaurentPoly, point: &[Complex64]) -> Result<Self> {
        let n = p.nvars;
        let mut lo = vec![0i64; n];
        let mut hi = vec![0i64; n];
        for e in p.terms.keys() {
            for i in 0..n {
                lo[i] = lo[i].min(e[i]);
                hi[i] = hi[i].max(e[i]);
            }
        }
        let mut powers = Vec::with_capacity(n);
        for i in 0..n {
            let z = point[i];
            if z == Complex64::new(0.0, 0.0) && lo[i] < 0 {
                return Err(Error::ZeroCoordinate { var: i + 1 });
            }
            let len = (hi[i] - lo[i]) as usize + 1;
            let mut row = vec![Complex64::new(0.0, 0.0); len];
            row[(-lo[i]) as usize] = Complex64::new(1.0, 0.0);
            for k in 1..=hi[i] {
                let idx = (k - lo[i]) as usize;
                row[idx] = row[idx - 1] * z;
            }
            if lo[i] < 0 {
                let inv = z.inv();
                for k in (lo[i]..0).rev() {
                    let idx = (k - lo[i]) as usize;
                    row[idx] = row[idx + 1] * inv;
                }
            }
            powers.push(row);
        }
        Ok(PowerCache { lo, powers })
    }

    #[inline]
    pub(crate) fn get(&self, var: usize, k: i64) -> Complex64 {
        self.powers[var][(k - self.lo[var]) as usize]
    }
}

#[derive(Serialize, Deserialize)]
struct SparseTerm {
    e: Vec<i64>,
    c: [f64; 2],
}

#[derive(Serialize, Deserialize)]
struct SparseDoc {
    n: usize,
    terms: Vec<SparseTerm>,
}

impl From<&LaurentPoly> for SparseDoc {
    fn from(p: &LaurentPoly) -> Self {
        SparseDoc {
            n: p.nvars,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| SparseTerm {
                    e: e.0.clone(),
                    c: [c.re, c.im],
                })
                .collect(),
        }
    }
}

impl TryFrom<SparseDoc> for LaurentPoly {
    type Error = Error;

    fn try_from(doc: SparseDoc) -> Result<Self> {
        LaurentPoly::from_terms(
            doc.n,
            doc.terms
                .into_iter()
                .map(|t| (t.e, Complex64::new(t.c[0], t.c[1]))),
        )
    }
}

fn fmt_coeff(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else {
        write!(f, "({},{})", c.re, c.im)
    }
}

/// Prints in the grammar accepted by [`LaurentPoly::parse`], so that
/// `parse(print(P)) == P`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mut c = *c;
            if idx > 0 {
                if c.im == 0.0 && c.re < 0.0 {
                    write!(f, " - ")?;
                    c = -c;
                } else {
                    write!(f, " + ")?;
                }
            }
            let factors: Vec<String> =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &k)| k != 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("z{}", i + 1)
                        } else {
                            format!("z{}^{}", i + 1, k)
                        }
                    })
                    .collect();
            if factors.is_empty() {
                fmt_coeff(c, f)?;
            } else {
                if c != Complex64::new(1.0, 0.0) {
                    fmt_coeff(c, f)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
