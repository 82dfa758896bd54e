//! Integer substitution matrices and their kernel lattices.
//!
//! For `A ∈ ℤ^{m×n}` the substitution `P ↦ P_A` sends each monomial `z^v`
//! of an `n`-variable polynomial to `z^{A·v}` in `m` variables. How close
//! `m(P_A)` is to `m(P)` is governed by the kernel lattice
//! `Λ_A = ker(A) ∩ ℤⁿ` through its shortest nonzero `ℓ∞` norm `ρ(A)`.

mod enumerate;
mod hnf;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::laurent::{ExponentVector, LaurentPoly};
use crate::sum::Neumaier;
use crate::{Error, Result};

pub use enumerate::DEFAULT_BUDGET;
pub use hnf::hermite_basis;

use enumerate::{shortest_linf, EchelonBasis};

/// The invariant `ρ(A)`, with `+∞` for a trivial kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Rho {
    Finite(u64),
    Infinite,
}

impl Rho {
    pub fn as_f64(self) -> f64 {
        match self {
            Rho::Finite(r) => r as f64,
            Rho::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Rho::Finite(r) => Some(r),
            Rho::Infinite => None,
        }
    }
}

impl fmt::Display for Rho {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rho::Finite(r) => write!(f, "{r}"),
            Rho::Infinite => write!(f, "inf"),
        }
    }
}

/// An `m×n` integer matrix together with a ℤ-basis of its kernel lattice
/// and the exact value of `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
    kernel: Vec<Vec<i64>>,
    rho: Rho,
    shortest: Option<Vec<i64>>,
}

impl SubstMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_budget(rows, DEFAULT_BUDGET)
    }

    /// Like [`new`](Self::new) with an explicit cap on enumeration nodes for
    /// the computation of `ρ`.
    pub fn with_budget(rows: Vec<Vec<i64>>, budget: u64) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if m == 0 || n == 0 {
            return Err(Error::precondition("matrix must have at least one entry"));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        let kernel = kernel_basis_flat(m, n, &entries)?;
        let echelon = EchelonBasis::new(&kernel)?;
        let (rho, shortest) = match shortest_linf(&echelon, budget)? {
            Some((r, v)) => (Rho::Finite(r), Some(v)),
            None => (Rho::Infinite, None),
        };
        Ok(SubstMatrix {
            rows: m,
            cols: n,
            entries,
            kernel,
            rho,
            shortest,
        })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(rows).expect("identity has trivial kernel")
    }

    /// Parses `"1 0 3; 0 1 5"`: rows separated by `;`, entries by
    /// whitespace or commas.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(parse_int_rows(text)?)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Hermite-form ℤ-basis of `Λ_A`.
    pub fn kernel_basis(&self) -> &[Vec<i64>] {
        &self.kernel
    }

    /// `d(A) = dim ker(A)`.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn rho(&self) -> Rho {
        self.rho
    }

    /// A kernel vector attaining `ρ`, when the kernel is nontrivial.
    pub fn shortest_vector(&self) -> Option<&[i64]> {
        self.shortest.as_deref()
    }

    /// `A · v`.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Every vector of `Λ_A` with `‖v‖∞ ≤ radius`, zero included.
    pub fn lattice_points(&self, radius: u64) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        if self.kernel.is_empty() {
            out.push(vec![0; self.cols]);
            return Ok(out);
        }
        let e = EchelonBasis::new(&self.kernel)?;
        e.for_each_in_box(radius as i64, DEFAULT_BUDGET, |v| out.push(v.to_vec()))?;
        Ok(out)
    }
}

impl FromStr for SubstMatrix {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for SubstMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(i64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

pub(crate) fn parse_int_rows(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut rows = Vec::new();
    let mut offset = 0usize;
    for row in text.split(';') {
        let mut parsed = Vec::new();
        for tok in row.split(|c: char| c.is_whitespace() || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let v = tok.parse::<i64>().map_err(|_| Error::Parse {
                pos: offset + row.find(tok).unwrap_or(0),
                message: format!("bad matrix entry '{tok}'"),
            })?;
            parsed.push(v);
        }
        if parsed.is_empty() {
            return Err(Error::Parse {
                pos: offset,
                message: "empty matrix row".into(),
            });
        }
        rows.push(parsed);
        offset += row.len() + 1;
    }
    Ok(rows)
}

fn kernel_basis_flat(m: usize, n: usize, entries: &[i64]) -> Result<Vec<Vec<i64>>> {
    // Reduce Aᵀ with a tracked unimodular transform U; rows of U that map to
    // zero rows of U·Aᵀ form a ℤ-basis of ker(A) ∩ ℤⁿ.
    let mut transposed: Vec<Vec<i64>> = (0..n)
        .map(|j| (0..m).map(|i| entries[i * n + j]).collect())
        .collect();
    let mut transform: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    let rank = hnf::hermite_rows(&mut transposed, Some(&mut transform))?.len();
    let kernel: Vec<Vec<i64>> = transform.split_off(rank);
    if kernel.is_empty() {
        return Ok(kernel);
    }
    // Hermite form read from the last coordinate, so trailing pivots are
    // positive: "1 0 3; 0 1 5" gives (−3, −5, 1).
    let flip = |v: &[Vec<i64>]| -> Vec<Vec<i64>> {
        v.iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect()
    };
    Ok(flip(&hermite_basis(&flip(&kernel))?))
}

/// A ℤ-basis of `ker(A) ∩ ℤⁿ` in Hermite form (pivots taken from the last
/// coordinate); empty when `A` has full
/// column rank.
pub fn kernel_basis(rows: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let entries: Vec<i64> = rows.iter().flatten().copied().collect();
    if entries.len() != m * n {
        return Err(Error::precondition("matrix rows have unequal lengths"));
    }
    kernel_basis_flat(m, n, &entries)
}

/// Shortest nonzero `ℓ∞` norm in the lattice spanned by `basis`.
pub fn rho_of_basis(basis: &[Vec<i64>], budget: u64) -> Result<Rho> {
    let e = EchelonBasis::new(basis)?;
    Ok(match shortest_linf(&e, budget)? {
        Some((r, _)) => Rho::Finite(r),
        None => Rho::Infinite,
    })
}

/// The monomial substitution `P_A(z) = Σ c_v z^{A·v}` in `m` variables.
///
/// Colliding images are summed with compensated summation. The result may
/// be the zero polynomial; measure routines reject it.
pub fn substitute(p: &LaurentPoly, a: &SubstMatrix) -> Result<LaurentPoly> {
    if p.nvars() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.ncols(),
            found: p.nvars(),
        });
    }
    let mut grouped: BTreeMap<ExponentVector, Vec<Complex64>> = BTreeMap::new();
    for (e, c) in p.terms() {
        let img = a.apply(e.as_slice());
        grouped
            .entry(ExponentVector::new(img))
            .or_default()
            .push(*c);
    }
    Ok(LaurentPoly::from_groups(a.nrows(), grouped))
}

/// Truncated lattice series `Σ_{v ∈ Λ∖0} r^{−‖v‖∞}` with the neglected tail
/// below `cutoff`.
///
/// The tail is controlled shell by shell through the point count
/// `#{‖v‖∞ ≤ q} ≤ (2q/ρ + 1)^d`.
pub fn lattice_exp_sum(basis: &[Vec<i64>], r: f64, cutoff: f64) -> Result<f64> {
    if r <= 1.0 {
        return Err(Error::precondition("lattice series needs r > 1"));
    }
    if basis.is_empty() || basis.iter().all(|b| b.iter().all(|&x| x == 0)) {
        return Ok(0.0);
    }
    let echelon = EchelonBasis::new(basis)?;
    let d = echelon.rank() as i32;
    let rho = match shortest_linf(&echelon, DEFAULT_BUDGET)? {
        Some((rho, _)) => rho as f64,
        None => return Ok(0.0),
    };
    let count = |q: f64| (2.0 * q / rho + 1.0).powi(d);
    let ln_r = r.ln();
    let shell = |q: u64| count(q as f64) * (-(q as f64) * ln_r).exp();
    // smallest radius whose tail bound is below the cutoff
    let mut radius = rho as u64;
    loop {
        let mut tail = Neumaier::default();
        let mut q = radius + 1;
        loop {
            let t = shell(q);
            tail.add(t);
            if t < 1e-3 * cutoff.max(f64::MIN_POSITIVE) * 1e-3 && q > radius + 8 {
                break;
            }
            q += 1;
        }
        if tail.value() < cutoff {
            break;
        }
        radius += (radius / 4).max(1);
    }
    let mut by_norm: BTreeMap<u64, u64> = BTreeMap::new();
    echelon.for_each_in_box(radius as i64, DEFAULT_BUDGET, |v| {
        let norm = v.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        if norm > 0 {
            *by_norm.entry(norm).or_default() += 1;
        }
    })?;
    let mut acc = Neumaier::default();
    for (norm, count) in by_norm.iter().rev() {
        acc.add(*count as f64 * (-(*norm as f64) * ln_r).exp());
    }
    Ok(acc.value())
}

/// `(d+1) 3^d / r^ρ`, valid when `ρ log r ≥ 2d/3`.
pub fn lattice_sum_bound(d: usize, rho: f64, r: f64) -> f64 {
    (d as f64 + 1.0) * 3f64.powi(d as i32) * (-rho * r.ln()).exp()
}

/// `3^d d! / r^ρ · Σ_{k=0}^{d} (2/(3ρ log r))^k / (d−k)!`, valid for every
/// `r > 1`.
pub fn lattice_sum_bound_general(d: usize, rho: f64, r: f64) -> f64 {
    let x = 2.0 / (3.0 * rho * r.ln());
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let series: f64 = (0..=d).map(|k| x.powi(k as i32) / fact(d - k)).sum();
    3f64.powi(d as i32) * fact(d) * (-rho * r.ln()).exp() * series
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md(d: i64) -> Vec<Vec<i64>> {
        vec![vec![d + 2, 0, 1, 0], vec![0, 1, 0, d + 2]]
    }

    #[test]
    fn kernel_of_row_vector() {
        for d in [1, 3, 5, 12] {
            let k = kernel_basis(&[vec![1, d]]).unwrap();
            assert_eq!(k.len(), 1);
            assert!(k[0] == vec![-d, 1] || k[0] == vec![d, -1], "{k:?}");
        }
    }

    #[test]
    fn kernel_of_md_matches_displayed_generators() {
        for d in [0, 1, 3, 10] {
            let k = kernel_basis(&md(d)).unwrap();
            let expected = hermite_basis(&[vec![-1, 0, d + 2, 0], vec![0, d + 2, 0, -1]]).unwrap();
            assert_eq!(hermite_basis(&k).unwrap(), expected);
        }
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let a = SubstMatrix::identity(2);
        assert!(a.kernel_basis().is_empty());
        assert_eq!(a.kernel_dim(), 0);
        assert_eq!(a.rho(), Rho::Infinite);
        assert_eq!(a.rho().as_f64(), f64::INFINITY);
    }

    #[test]
    fn rho_examples() {
        assert_eq!(SubstMatrix::parse("1 5").unwrap().rho(), Rho::Finite(5));
        assert_eq!(SubstMatrix::new(md(3)).unwrap().rho(), Rho::Finite(5));
        let a = SubstMatrix::parse("1 0 3; 0 1 5").unwrap();
        assert_eq!(a.kernel_basis(), &[vec![-3, -5, 1]]);
        assert_eq!(a.rho(), Rho::Finite(5));
    }

    #[test]
    fn rho_by_exhaustive_search() {
        // oracle: scan the whole box of radius 5 in ℤ² for kernel vectors
        let a = SubstMatrix::parse("1 5").unwrap();
        let mut best = u64::MAX;
        for x in -5i64..=5 {
            for y in -5i64..=5 {
                if (x, y) != (0, 0) && x + 5 * y == 0 {
                    best = best.min(x.unsigned_abs().max(y.unsigned_abs()));
                }
            }
        }
        assert_eq!(a.rho(), Rho::Finite(best));
    }

    #[test]
    fn matrix_text_format() {
        let a = SubstMatrix::parse("1, 0 ,3;0 1 5").unwrap();
        assert_eq!((a.nrows(), a.ncols()), (2, 3));
        assert_eq!(a.to_string(), "1 0 3; 0 1 5");
        assert!(SubstMatrix::parse("1 2; 3").is_err());
        assert!(SubstMatrix::parse("1 x").is_err());
        assert!(SubstMatrix::parse("1 2;").is_err());
    }

    #[test]
    fn substitution_examples() {
        let p = LaurentPoly::parse("z1+z2+1", 2).unwrap();
        let a = SubstMatrix::parse("1 3").unwrap();
        assert_eq!(
            substitute(&p, &a).unwrap(),
            LaurentPoly::parse("z1 + z1^3 + 1", 1).unwrap()
        );
        let q = LaurentPoly::parse("z1 - z2", 2).unwrap();
        let ones = SubstMatrix::parse("1 1").unwrap();
        assert!(substitute(&q, &ones).unwrap().is_zero());
        let pinf = LaurentPoly::parse("(1-z1)*(1-z2) - (1-z3)*(1-z4)", 4).unwrap();
        let m1 = SubstMatrix::new(md(1)).unwrap();
        assert_eq!(substitute(&pinf, &m1).unwrap().len(), 6);
        assert!(substitute(&pinf, &a).is_err());
    }

    #[test]
    fn lattice_sum_of_5z() {
        let s = lattice_exp_sum(&[vec![5]], std::f64::consts::E, 1e-15).unwrap();
        let exact = 2.0 * (-5f64).exp() / (1.0 - (-5f64).exp());
        assert!((s - exact).abs() < 1e-14, "{s} vs {exact}");
        assert!((exact - 0.013568).abs() < 1e-6);
        let bound = lattice_sum_bound(1, 5.0, std::f64::consts::E);
        assert!((bound - 0.040428).abs() < 1e-6);
        assert!(s <= bound);
        assert_eq!(lattice_exp_sum(&[], 2.0, 1e-12).unwrap(), 0.0);
        assert!(lattice_exp_sum(&[vec![5]], 1.0, 1e-12).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=3, 2usize..=5)
            .prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-5i64..=5, n), m))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kernel_vectors_are_annihilated(rows in arb_matrix()) {
            let a = SubstMatrix::new(rows.clone()).unwrap();
            for b in a.kernel_basis() {
                prop_assert!(a.apply(b).iter().all(|&x| x == 0));
            }
            // full rank: Hermite form keeps every row
            prop_assert_eq!(hermite_basis(a.kernel_basis()).unwrap().len(), a.kernel_dim());
            for v in a.lattice_points(4).unwrap() {
                prop_assert!(a.apply(&v).iter().all(|&x| x == 0));
                let norm = v.iter().map(|x| x.unsigned_abs()).max().unwrap();
                if norm > 0 {
                    prop_assert!(Rho::Finite(norm) >= a.rho());
                }
            }
            if let Some(v) = a.shortest_vector() {
                prop_assert_eq!(Rho::Finite(v.iter().map(|x| x.unsigned_abs()).max().unwrap()), a.rho());
            }
        }

        #[test]
        fn rho_invariant_under_unimodular_rows(rows in arb_matrix(), s in -3i64..=3) {
            // B = U·A with U = [[1, s], [0, 1]] (or a sign flip when m = 1)
            let mut b = rows.clone();
            if b.len() >= 2 {
                for j in 0..b[0].len() {
                    b[0][j] += s * rows[1][j];
                }
            } else {
                for x in b[0].iter_mut() { *x = -*x; }
            }
            // append a zero row, which changes nothing
            b.push(vec![0; rows[0].len()]);
            let ra = SubstMatrix::new(rows).unwrap().rho();
            let rb = SubstMatrix::new(b).unwrap().rho();
            prop_assert_eq!(ra, rb);
        }

        #[test]
        fn substitution_commutes_with_evaluation(
            rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 2),
            t in prop::collection::vec(0.0..6.28f64, 2),
        ) {
            let p = LaurentPoly::parse("z1*z2 - 2*z3^-1 + (0.5,1)*z1^2*z3", 3).unwrap();
            let a = SubstMatrix::new(rows).unwrap();
            let pa = substitute(&p, &a).unwrap();
            let z: Vec<Complex64> = t.iter().map(|&x| Complex64::cis(x)).collect();
            // z^A: the j-th variable of P becomes Π_i z_i^{a_ij}
            let img: Vec<Complex64> = (0..3)
                .map(|j| (0..2).map(|i| z[i].powi(a.entry(i, j) as i32)).product())
                .collect();
            let lhs = pa.eval(&z).unwrap();
            let rhs = p.eval(&img).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }

        #[test]
        fn collision_free_when_rho_exceeds_diam(d in 2i64..30) {
            let p = LaurentPoly::parse("z1 + z2 + 1 + (2,1)*z1*z2", 2).unwrap();
            let a = SubstMatrix::new(vec![vec![1, d]]).unwrap();
            let s = p.stats().unwrap();
            prop_assert!(a.rho().as_f64() > s.diam as f64);
            let t = substitute(&p, &a).unwrap().stats().unwrap();
            prop_assert_eq!(t.k, s.k);
            prop_assert_eq!(t.linf, s.linf);
        }

        #[test]
        fn lattice_sum_respects_both_bounds(v in 2i64..7, w in 1i64..7, r in 1.5..4.0f64) {
            let basis = vec![vec![v, 1, 0], vec![0, w, v]];
            let s = lattice_exp_sum(&basis, r, 1e-13).unwrap();
            let rho = rho_of_basis(&basis, DEFAULT_BUDGET).unwrap().as_f64();
            prop_assert!(s <= lattice_sum_bound_general(2, rho, r) * (1.0 + 1e-12));
            if rho * r.ln() >= 4.0 / 3.0 {
                prop_assert!(s <= lattice_sum_bound(2, rho, r) * (1.0 + 1e-12));
            }
        }
    }
}
