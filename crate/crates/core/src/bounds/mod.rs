//! Explicit constants and error bounds for `|m(P_A) − m(P)|`, sublevel sets
//! and regularisation, as pure functions of [`PolyStats`] and `ρ(A)`.

use std::collections::BTreeMap;
use std::f64::consts::{E, FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::laurent::{LaurentPoly, PolyStats};
use crate::{Error, Result};

/// The main bound evaluated at one `ρ`, with its applicability flag.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub rho0: f64,
    pub rho: f64,
    /// `ρ ≥ ρ₀`: the inequality is proven only here.
    pub applicable: bool,
    pub bound_value: f64,
    /// Named intermediate quantities: `alpha`, `epsilon`, `delta_eps`, `c2`.
    pub components: BTreeMap<String, f64>,
}

fn need_binomial(stats: &PolyStats) -> Result<()> {
    if stats.k < 2 {
        return Err(Error::precondition("bounds need at least two terms"));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::precondition("α must lie in (0, 1)"));
    }
    Ok(())
}

/// Threshold `ρ₀ = max(diam + 1, 7 diam², exp(2(k−1) max(n, 5)))`.
pub fn rho0(stats: &PolyStats) -> Result<f64> {
    need_binomial(stats)?;
    let d = stats.diam as f64;
    let e = (2.0 * (stats.k as f64 - 1.0) * stats.n.max(5) as f64).exp();
    Ok((d + 1.0).max(7.0 * d * d).max(e))
}

/// Width `δ_ε = min(√ε / (diam·L₁), log(4/3) / diam)` of the annulus on which
/// `|P|² + ε` stays away from zero. `+∞` when `diam = 0`.
pub fn delta_eps(stats: &PolyStats, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::precondition("ε must be positive"));
    }
    if stats.diam == 0 {
        return Ok(f64::INFINITY);
    }
    let d = stats.diam as f64;
    Ok((eps.sqrt() / (d * stats.l1)).min((4.0f64 / 3.0).ln() / d))
}

/// `C₁(n, k) = 6k (18 n k²)^{n−1}`.
pub fn c1(n: usize, k: usize) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    6.0 * kf * (18.0 * nf * kf * kf).powi(n as i32 - 1)
}

/// `C₂(n, k, α) = 12k² (18 n k²)^{n−1} α^{1−n} / (1−α)`.
pub fn c2(n: usize, k: usize, alpha: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    12.0 * kf * kf * (18.0 * nf * kf * kf).powi(n as i32 - 1) * alpha.powi(1 - n as i32)
        / (1.0 - alpha)
}

/// Upper bound for the Haar measure of `{|P| ≤ r}`, capped at 1.
pub fn sublevel_bound(stats: &PolyStats, r: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(r > 0.0) {
        return Err(Error::precondition("sublevel threshold must be positive"));
    }
    if stats.kappa < 2 {
        // a monomial has constant modulus L∞ on the torus
        return Ok(if r < stats.linf { 0.0 } else { 1.0 });
    }
    let expo = (1.0 - alpha) / (stats.kappa as f64 - 1.0);
    let b = c1(stats.n, stats.k) * alpha.powi(1 - stats.n as i32) * (r / stats.linf).powf(expo);
    Ok(b.min(1.0))
}

/// `C₂ ε^{(1−α)/(2(k−1))}`, bounding `m_ε(P) − m(P)` for `L∞(P) = 1`.
pub fn regularization_bound(stats: &PolyStats, eps: f64, alpha: f64) -> Result<f64> {
    need_binomial(stats)?;
    check_alpha(alpha)?;
    if (stats.linf - 1.0).abs() > 1e-12 {
        return Err(Error::precondition("normalise P to L∞ = 1 first"));
    }
    if !(eps > 0.0) {
        return Err(Error::precondition("ε must be positive"));
    }
    let expo = (1.0 - alpha) / (2.0 * (stats.k as f64 - 1.0));
    Ok(c2(stats.n, stats.k, alpha) * eps.powf(expo))
}

/// `|log ε| + 2|log L₁| + 3`, a bound for `|log(|P|² + ε)|` on the annulus
/// of width `δ_ε`.
pub fn annulus_log_bound(stats: &PolyStats, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::precondition("ε must be positive"));
    }
    Ok(eps.ln().abs() + 2.0 * stats.l1.ln().abs() + 3.0)
}

/// `(d+1) 3^d max|f| e^{−δρ}` for `f` holomorphic on the annulus of width δ.
pub fn holomorphic_transfer_bound(d: usize, delta: f64, rho: f64, max_f: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::precondition("δ must be positive"));
    }
    if rho < 2.0 * d as f64 / (3.0 * delta) {
        return Err(Error::precondition(format!(
            "need ρ ≥ 2d/(3δ) = {}",
            2.0 * d as f64 / (3.0 * delta)
        )));
    }
    let df = d as f64;
    Ok((df + 1.0) * 3f64.powi(d as i32) * max_f * (-delta * rho).exp())
}

/// Transfer bound for the regularised integrand `½ log(|P|² + ε)`, which is
/// holomorphic on the annulus of width `δ_ε`.
pub fn regularized_transfer_bound(stats: &PolyStats, eps: f64, rho: f64, d: usize) -> Result<f64> {
    let delta = delta_eps(stats, eps)?;
    // |½ log(|P|²+ε)| plus the π/2 from the imaginary part of the branch
    let max_f = 0.5 * annulus_log_bound(stats, eps)? + FRAC_PI_2;
    holomorphic_transfer_bound(d, delta, rho, max_f)
}

/// `8 (36ek)^{n−1} (log ρ)ⁿ (diam/ρ)^{1/(k−1)}`, reported with its
/// applicability flag and the internal choice of α and ε.
pub fn main_error_bound(stats: &PolyStats, rho: f64) -> Result<BoundReport> {
    need_binomial(stats)?;
    if stats.n < 2 {
        return Err(Error::precondition("the main bound needs n ≥ 2"));
    }
    if !(rho > 1.0) {
        return Err(Error::precondition("ρ must exceed 1"));
    }
    let (n, k) = (stats.n as f64, stats.k as f64);
    let diam = stats.diam as f64;
    let lr = rho.ln();
    let value =
        8.0 * (36.0 * E * k).powf(n - 1.0) * lr.powf(n) * (diam / rho).powf(1.0 / (k - 1.0));

    let alpha = n * (k - 1.0) / lr;
    let eps = ((1.0 - alpha) * diam * stats.l1 / (k - 1.0) * lr / rho).powi(2);
    let mut components = BTreeMap::new();
    components.insert("alpha".to_string(), alpha);
    components.insert("epsilon".to_string(), eps);
    let c2v = if alpha > 0.0 && alpha < 1.0 {
        c2(stats.n, stats.k, alpha)
    } else {
        f64::INFINITY
    };
    components.insert("c2".to_string(), c2v);
    let de = if eps > 0.0 {
        delta_eps(stats, eps)?
    } else {
        0.0
    };
    components.insert("delta_eps".to_string(), de);

    let r0 = rho0(stats)?;
    Ok(BoundReport {
        rho0: r0,
        rho,
        applicable: rho >= r0,
        bound_value: value,
        components,
    })
}

/// Points sampled per annulus shell by [`exponential_bound`].
const SHELL_SAMPLES: usize = 2048;

/// Minimum-norm Newton steps for `P(z) = 0` from `z`, with radii clamped to the
/// annulus. Returns the smallest `|P|` seen.
fn descend(p: &LaurentPoly, mut z: Vec<Complex64>, delta: f64) -> Result<f64> {
    let (lo, hi) = ((-delta).exp(), delta.exp());
    let mut best = f64::INFINITY;
    for _ in 0..40 {
        let v = p.eval(&z)?;
        best = best.min(v.norm());
        let mut grad = vec![Complex64::new(0.0, 0.0); z.len()];
        for (e, c) in p.terms() {
            let mono = LaurentPoly::monomial(e.as_slice().to_vec(), *c).eval(&z)?;
            for (g, (&k, zi)) in grad.iter_mut().zip(e.as_slice().iter().zip(&z)) {
                *g += mono * k as f64 / zi;
            }
        }
        let g2: f64 = grad.iter().map(|g| g.norm_sqr()).sum();
        if g2 == 0.0 {
            break;
        }
        let step = v / g2;
        for (zi, g) in z.iter_mut().zip(&grad) {
            *zi -= step * g.conj();
            let r = zi.norm().clamp(lo, hi);
            *zi = Complex64::from_polar(r, zi.arg());
        }
    }
    Ok(best)
}

/// Sampled `max |½ log|P(z)P*(z)|| + π/2` over `e^{−δ} ≤ |z_i| ≤ e^{δ}`.
///
/// Heuristic: deterministic random angles on the corner shells and on random
/// interior radii. The smallest samples of `|P|` and `|P*|` seed a Newton
/// search for zeros; finding one is an error.
pub fn annulus_sup(p: &LaurentPoly, delta: f64) -> Result<f64> {
    let n = p.nvars();
    let stats = p.stats()?;
    let pstar = p.conj_reciprocal();
    let tol = 1e-8 * stats.l1;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sup: f64 = 0.0;
    let mut seeds: Vec<(f64, Vec<Complex64>, bool)> = Vec::new();
    let mut visit = |h: &[f64], rng: &mut ChaCha8Rng| -> Result<()> {
        let mut low = [(f64::INFINITY, Vec::new()), (f64::INFINITY, Vec::new())];
        for _ in 0..SHELL_SAMPLES {
            let z: Vec<Complex64> = h
                .iter()
                .map(|&hi| Complex64::from_polar(hi.exp(), TAU * rng.random::<f64>()))
                .collect();
            let (a, b) = (p.eval(&z)?.norm(), pstar.eval(&z)?.norm());
            sup = sup.max(0.5 * (a * b).ln().abs() + FRAC_PI_2);
            for (slot, v) in low.iter_mut().zip([a, b]) {
                if v < slot.0 {
                    *slot = (v, z.clone());
                }
            }
        }
        let [(a, za), (b, zb)] = low;
        seeds.push((a, za, false));
        seeds.push((b, zb, true));
        Ok(())
    };
    let corners = 1usize << n.min(10);
    for mask in 0..corners {
        let h: Vec<f64> = (0..n)
            .map(|i| if mask >> i & 1 == 1 { delta } else { -delta })
            .collect();
        visit(&h, &mut rng)?;
    }
    for _ in 0..8 {
        let h: Vec<f64> = (0..n).map(|_| rng.random_range(-delta..=delta)).collect();
        visit(&h, &mut rng)?;
    }
    visit(&vec![0.0; n], &mut rng)?;
    for (_, z, star) in seeds {
        let q = if star { &pstar } else { p };
        if descend(q, z, delta)? < tol {
            return Err(Error::precondition(format!(
                "P vanishes on the annulus of width {delta}"
            )));
        }
    }
    Ok(sup)
}

/// `C e^{−δρ}` with `C = (n+1) 3ⁿ · 1.5 · annulus_sup(P, δ)`, for `P` with no
/// zeros on the torus. The constant is estimated by sampling, not certified.
pub fn exponential_bound(p: &LaurentPoly, delta: f64, rho: f64, d: usize) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::precondition("δ must be positive"));
    }
    if rho < 2.0 * d as f64 / (3.0 * delta) {
        return Err(Error::precondition(format!(
            "need ρ ≥ 2d/(3δ) = {}",
            2.0 * d as f64 / (3.0 * delta)
        )));
    }
    let n = p.nvars();
    let m = 1.5 * annulus_sup(p, delta)?;
    Ok((n as f64 + 1.0) * 3f64.powi(n as i32) * m * (-delta * rho).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mahler::{
        integrate, measure, sublevel_measure, IntegrandKind, Rule, TorusIntegrand,
    };

    fn stats(s: &str, n: usize) -> PolyStats {
        LaurentPoly::parse(s, n).unwrap().stats().unwrap()
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs()
    }

    #[test]
    fn rho0_examples() {
        let t = stats("z1 + z2 + 1", 2);
        assert!(close(rho0(&t).unwrap(), 20f64.exp(), 1e-15));
        assert!(close(rho0(&t).unwrap(), 4.8517e8, 1e-4));
        let s = PolyStats {
            n: 5,
            k: 2,
            k_i: vec![2, 1, 1, 1, 1],
            kappa: 2,
            diam: 10,
            l1: 2.0,
            linf: 1.0,
        };
        assert!(close(rho0(&s).unwrap(), 22026.465794806718, 1e-12));
        assert!(rho0(&stats("3*z1^2", 1)).is_err());
    }

    #[test]
    fn delta_eps_examples() {
        let t = stats("z1 + z2 + 1", 2);
        let l43 = (4.0f64 / 3.0).ln();
        assert!(close(delta_eps(&t, 9.0 * l43 * l43).unwrap(), l43, 1e-14));
        assert!(close(
            delta_eps(&t, 1.0).unwrap(),
            0.2876820724517809,
            1e-14
        ));
        assert!(delta_eps(&t, 1e-30).unwrap() < 1e-15);
        assert_eq!(delta_eps(&stats("2", 1), 1.0).unwrap(), f64::INFINITY);
        assert!(delta_eps(&t, 0.0).is_err());
    }

    #[test]
    fn constant_examples() {
        assert_eq!(c1(1, 3), 18.0);
        assert_eq!(c1(2, 3), 5832.0);
        assert_eq!(c1(1, 2), 12.0);
        assert!(close(c2(1, 2, 0.5), 96.0, 1e-15));
        assert!(close(c2(2, 3, 0.5), 139968.0, 1e-15));
        assert!(c2(2, 3, 1.0 - 1e-12) > 1e15);
    }

    #[test]
    fn constants_increase_in_n_and_k() {
        for n in 1..=4 {
            for k in 2..=8 {
                let here = (c1(n, k), c2(n, k, 0.4));
                assert!(here.0 > 0.0 && here.1 > 0.0);
                if k < 8 {
                    assert!(c1(n, k + 1) > here.0 && c2(n, k + 1, 0.4) > here.1);
                }
                if n < 4 {
                    assert!(c1(n + 1, k) > here.0 && c2(n + 1, k, 0.4) > here.1);
                }
            }
        }
    }

    #[test]
    fn sublevel_bound_examples() {
        let s = stats("z1 - 1", 1);
        assert_eq!(sublevel_bound(&s, 0.1, 0.5).unwrap(), 1.0);
        assert_eq!(sublevel_bound(&s, 0.1, 0.01).unwrap(), 1.0);
        let tiny = sublevel_bound(&s, 1e-6, 0.5).unwrap();
        assert!(close(tiny, 12.0 * 1e-3, 1e-12));
        assert_eq!(sublevel_bound(&s, 2.0, 0.3).unwrap(), 1.0);
        let mono = stats("2*z1^3", 1);
        assert_eq!(sublevel_bound(&mono, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(sublevel_bound(&mono, 2.0, 0.5).unwrap(), 1.0);
        assert!(sublevel_bound(&s, 0.1, 1.0).is_err());
    }

    #[test]
    fn sublevel_bound_dominates_measurement() {
        let battery = [
            ("z1 - 1", 1),
            ("z1 + z2 + 1", 2),
            ("(z1 - 1)*(z2 - 1)", 2),
            ("(z1 - 1)^2", 1),
        ];
        for (src, n) in battery {
            let p = LaurentPoly::parse(src, n).unwrap();
            let s = p.stats().unwrap();
            for r in [0.01, 0.1, 0.5] {
                let mc = sublevel_measure(&p, r, 50_000, 9).unwrap();
                for alpha in [0.1, 0.5] {
                    let b = sublevel_bound(&s, r, alpha).unwrap();
                    assert!(mc.upper <= b, "{src} r={r} α={alpha}: {} > {b}", mc.upper);
                }
            }
        }
    }

    #[test]
    fn regularization_examples() {
        let s = stats("z1 - 1", 1);
        assert!(close(
            regularization_bound(&s, 1e-4, 0.5).unwrap(),
            9.6,
            1e-12
        ));
        assert!(regularization_bound(&s, 1e-300, 0.5).unwrap() < 1e-70);
        assert!(regularization_bound(&stats("2*z1 - 1", 1), 0.1, 0.5).is_err());

        let p = LaurentPoly::parse("z1 + z2 + 1", 2).unwrap();
        let st = p.stats().unwrap();
        let m = measure(&p, 1024).unwrap().value;
        for eps in [1e-2, 1e-3, 1e-4] {
            let f = TorusIntegrand::new(IntegrandKind::Regularized(eps), p.clone()).unwrap();
            let gap = integrate(&f, None, Rule::Quadrature { grid: 512 }).unwrap() - m;
            assert!(gap >= -1e-6);
            for alpha in [0.1, 0.5] {
                assert!(gap <= regularization_bound(&st, eps, alpha).unwrap());
            }
        }
    }

    #[test]
    fn annulus_and_transfer_examples() {
        let s = stats("z1 - 1", 1);
        assert!(close(
            annulus_log_bound(&s, 1.0).unwrap(),
            3.0 + 2.0 * 2f64.ln(),
            1e-15
        ));
        let t = stats("z1 + z2 + 1", 2);
        assert!(close(
            annulus_log_bound(&t, 0.01).unwrap(),
            9.802394763,
            1e-9
        ));
        let unit = PolyStats { l1: E, ..t.clone() };
        assert!(close(
            annulus_log_bound(&unit, (-2f64).exp()).unwrap(),
            7.0,
            1e-14
        ));

        assert!(close(
            holomorphic_transfer_bound(1, 1.0, 10.0, 1.0).unwrap(),
            6.0 * (-10f64).exp(),
            1e-14
        ));
        assert!(close(
            holomorphic_transfer_bound(0, 0.5, 4.0, 2.0).unwrap(),
            2.0 * (-2f64).exp(),
            1e-14
        ));
        assert!(holomorphic_transfer_bound(3, 1.0, 2.0, 1.0).is_ok());
        assert!(holomorphic_transfer_bound(3, 1.0, 1.99, 1.0).is_err());
        assert!(regularized_transfer_bound(&t, 1e-2, 100.0, 1).unwrap() > 0.0);
    }

    #[test]
    fn main_bound_at_threshold() {
        let t = stats("z1 + z2 + 1", 2);
        let rep = main_error_bound(&t, 20f64.exp()).unwrap();
        assert!(rep.applicable);
        // second path: assemble the logarithm term by term
        let log_value = 8f64.ln() + (36.0 * E * 3.0).ln() + 2.0 * 20f64.ln() - 20.0 / 2.0;
        assert!(close(rep.bound_value, log_value.exp(), 1e-12));
        assert!(close(rep.bound_value, 42.66, 1e-3));
        assert!(close(rep.components["alpha"], 0.2, 1e-14));
        assert!(rep.components["epsilon"] > 0.0 && rep.components["c2"].is_finite());

        let low = main_error_bound(&t, 1000.0).unwrap();
        assert!(!low.applicable && low.bound_value.is_finite());
        let later = main_error_bound(&t, 21f64.exp()).unwrap();
        assert!(later.bound_value < rep.bound_value);
        assert!(main_error_bound(&stats("z1 - 1", 1), 1e9).is_err());
    }

    #[test]
    fn main_bound_dominates_measured_gap() {
        let p = LaurentPoly::parse("z1 + z2 + 1", 2).unwrap();
        let t = p.stats().unwrap();
        let m = 0.32306594721945053;
        for d in [100i64, 1000] {
            let a = crate::lattice::SubstMatrix::new(vec![vec![1, d]]).unwrap();
            let pa = crate::lattice::substitute(&p, &a).unwrap();
            let gap = (measure(&pa, 0).unwrap().value - m).abs();
            let rep = main_error_bound(&t, a.rho().as_f64()).unwrap();
            assert!(rep.bound_value > 1.0 && gap < 1e-3);
            assert!(gap <= rep.bound_value);
        }
    }

    #[test]
    fn exponential_bound_examples() {
        // m(z1 z2 − 2) = log 2 along every substitution
        let p = LaurentPoly::parse("z1*z2 - 2", 2).unwrap();
        let b = exponential_bound(&p, 0.3, 50.0, 1).unwrap();
        assert!(b > 0.0 && b < 1e-3);
        assert!(exponential_bound(&p, 0.3, 2.0, 1).is_err());
        // δ too wide: 1 + z1 vanishes on the torus
        let q = LaurentPoly::parse("1 + z1 + z2", 2).unwrap();
        assert!(exponential_bound(&q, 0.2, 50.0, 1).is_err());
    }
}
