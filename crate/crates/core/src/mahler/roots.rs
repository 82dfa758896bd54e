//! Polynomial roots. Low degrees use the eigenvalues of a balanced companion
//! matrix; high degrees use simultaneous Aberth–Ehrlich iteration, which is
//! quadratic per sweep instead of cubic.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

const RADIX: f64 = 2.0;

/// Degrees above this go to the Aberth iteration.
const ABERTH_FROM: usize = 48;

const ABERTH_MAX_SWEEPS: usize = 2000;

/// Roots of `Σ coeffs[i] zⁱ` (ascending order). Exactly-zero leading
/// coefficients are dropped first.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let deg = match coeffs.iter().rposition(|c| *c != zero) {
        Some(d) => d,
        None => return Err(Error::ZeroPolynomial),
    };
    let c = &coeffs[..=deg];
    match deg {
        0 => Ok(Vec::new()),
        1 => Ok(vec![-c[0] / c[1]]),
        2 => Ok(quadratic(c[2], c[1], c[0]).to_vec()),
        d if d <= ABERTH_FROM => companion_roots(c),
        _ => match aberth_roots(c) {
            Some(r) => Ok(r),
            None => companion_roots(c),
        },
    }
}

/// Initial approximations on circles whose radii come from the upper convex
/// hull of `(i, log|c_i|)`.
fn newton_polygon_start(c: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> = c
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > 0.0)
        .map(|(i, a)| (i, a.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) as f64 * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) as f64;
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(c.len() - 1);
    for (e, w) in hull.windows(2).enumerate() {
        let ((i, li), (j, lj)) = (w[0], w[1]);
        let m = j - i;
        let r = ((li - lj) / m as f64).exp();
        let offset = 0.7 + 2.1 * e as f64;
        for t in 0..m {
            let th = std::f64::consts::TAU * t as f64 / m as f64 + offset / m as f64;
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}

/// `P(z)/P'(z)` and whether `P(z)` is below its rounding error bound.
/// Evaluates the reversed polynomial at `1/z` outside the unit disc.
fn newton_ratio(c: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let n = c.len() - 1;
    let zero = Complex64::new(0.0, 0.0);
    let horner = |x: Complex64, coeffs: &mut dyn Iterator<Item = &Complex64>| {
        let (mut p, mut dp, mut s) = (zero, zero, 0.0);
        let ax = x.norm();
        for a in coeffs {
            dp = dp * x + p;
            p = p * x + a;
            s = s * ax + a.norm();
        }
        (p, dp, s)
    };
    let tol = 4.0 * (n as f64 + 1.0) * f64::EPSILON;
    if z.norm() <= 1.0 {
        let (p, dp, s) = horner(z, &mut c.iter().rev());
        let converged = p.norm() <= tol * s;
        if dp == zero {
            return (zero, converged);
        }
        (p / dp, converged)
    } else {
        let w = z.inv();
        let (q, dq, s) = horner(w, &mut c.iter());
        let converged = q.norm() <= tol * s;
        if q == zero {
            return (zero, true);
        }
        let denom = n as f64 - w * dq / q;
        if denom == zero {
            return (zero, converged);
        }
        (z / denom, converged)
    }
}

/// Gauss–Seidel Aberth–Ehrlich sweeps; `None` if they stall.
fn aberth_roots(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let mut z = newton_polygon_start(c);
    if z.len() != n {
        return None;
    }
    let mut done = vec![false; n];
    for _ in 0..ABERTH_MAX_SWEEPS {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, converged) = newton_ratio(c, z[i]);
            if converged {
                done[i] = true;
                continue;
            }
            all = false;
            let mut sum = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += (z[i] - zj).inv();
                }
            }
            let step = ratio / (1.0 - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
            }
        }
        if all {
            return z.iter().all(|r| r.is_finite()).then_some(z);
        }
    }
    None
}

fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation
    let q = if (b.conj() * disc).re >= 0.0 {
        -0.5 * (b + disc)
    } else {
        -0.5 * (b - disc)
    };
    if q == Complex64::new(0.0, 0.0) {
        return [q, q];
    }
    [q / a, c / q]
}

fn companion_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let lead = c[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    balance(&mut m);
    let schur = nalgebra::Schur::try_new(m, f64::EPSILON, 100 * n.max(30))
        .ok_or_else(|| Error::RootFinding(format!("QR iteration did not converge (degree {n})")))?;
    let eig = schur
        .eigenvalues()
        .ok_or_else(|| Error::RootFinding("Schur form is not triangular".into()))?;
    Ok(eig.iter().copied().collect())
}

/// Parlett–Reinsch balancing by powers of two: a diagonal similarity that
/// equalises row and column norms without rounding error.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    let sqrdx = RADIX * RADIX;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].l1_norm();
                    r += m[(i, j)].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut g = r / RADIX;
            let mut f = 1.0;
            let mut cc = c;
            while cc < g {
                f *= RADIX;
                cc *= sqrdx;
            }
            g = r * RADIX;
            while cc > g {
                f /= RADIX;
                cc /= sqrdx;
            }
            if (cc + r / f) / f < 0.95 * s {
                done = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    m[(i, j)] *= inv;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}
