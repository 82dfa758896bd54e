//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fail.

use std::f64::consts::{E, PI};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_mahler::bounds::{exponential_bound, regularization_bound, sublevel_bound};
use torus_mahler::lattice::{lattice_exp_sum, lattice_sum_bound, substitute, Rho, SubstMatrix};
use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::{
    integrate, measure_iterated, measure_mc, measure_univariate_exact, sublevel_measure,
    IntegrandKind, Rule, TorusIntegrand,
};
use torus_mahler::special::{
    expansion_coeffs, m_p_infinity, md_matrix, mpd_exact, p_infinity, ZETA3,
};

// Reference values recorded once from a 30-digit root finder and zeta
// implementation.
const LEHMER: f64 = 0.162357612007738139432198803555;
const ZETA_PRIME_M2_REF: f64 = -0.0304484570583932707802515304712;
const SMYTH: f64 = 0.3230659472;
const ALPHA0: f64 = -0.8908975;
const ALPHA1: f64 = -0.75;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn poly(src: &str, n: usize) -> LaurentPoly {
    LaurentPoly::parse(src, n).expect("valid polynomial")
}

fn c1_univariate() -> Outcome {
    let m2 = measure_univariate_exact(&poly("z1 - 2", 1)).unwrap().value;
    let lehmer = poly(
        "z1^10 + z1^9 - z1^7 - z1^6 - z1^5 - z1^4 - z1^3 + z1 + 1",
        1,
    );
    let ml = measure_univariate_exact(&lehmer).unwrap().value;
    let (e1, e2) = ((m2 - 2f64.ln()).abs(), (ml - LEHMER).abs());
    outcome(
        e1 < 1e-12 && e2 < 1e-9,
        format!("|m(z-2)-log2| = {e1:.1e}, |m(Lehmer)-ref| = {e2:.1e}"),
    )
}

fn c2_smyth() -> Outcome {
    let q = measure_iterated(&poly("z1 + z2 + 1", 2), 2048)
        .unwrap()
        .value;
    let exact = mpd_exact(1).unwrap();
    let (e1, e2, e3) = ((q - SMYTH).abs(), (q - exact).abs(), (exact - SMYTH).abs());
    outcome(
        e1 < 1e-4 && e2 < 1e-6 && e3 < 1e-6,
        format!(
            "quad {q:.10}, |quad-ref| = {e1:.1e}, |quad-exact| = {e2:.1e}, |exact-ref| = {e3:.1e}"
        ),
    )
}

fn c3_limit() -> Outcome {
    let m = m_p_infinity();
    let formula = 9.0 * ZETA3 / (2.0 * PI * PI);
    let e1 = (m - formula)
        .abs()
        .max((m + 18.0 * ZETA_PRIME_M2_REF).abs());
    let mc = measure_mc(&p_infinity(), 1_000_000, 42).unwrap();
    let e2 = (mc.value - m).abs();
    outcome(
        e1 < 1e-12 && e2 <= mc.error_estimate,
        format!(
            "|m-(-18ζ'(-2))| = {e1:.1e}, mc {:.5} (stderr {:.1e}), |mc-m| = {e2:.1e}",
            mc.value,
            mc.error_estimate / 3.0
        ),
    )
}

fn c4_rho_md() -> Outcome {
    let bad: Vec<u32> = (0..=50)
        .filter(|&d| md_matrix(d).rho() != Rho::Finite(u64::from(d) + 2))
        .collect();
    outcome(bad.is_empty(), format!("mismatches at d = {bad:?}"))
}

fn leading_ratio(d: u32) -> f64 {
    let rho = f64::from(d) + 2.0;
    (mpd_exact(d).unwrap() - m_p_infinity()) * (-2.0 * rho * rho / rho.ln())
}

fn c5_leading_term() -> Outcome {
    let (r400, r800) = (leading_ratio(400), leading_ratio(800));
    outcome(
        (0.9..=1.1).contains(&r400) && (r800 - 1.0).abs() < (r400 - 1.0).abs(),
        format!("ratio {r400:.5} at d=400, {r800:.5} at d=800"),
    )
}

fn c6_coefficients() -> Outcome {
    let d = 400.0;
    let gap = (d + 1.0) * (d + 2.0) * (mpd_exact(400).unwrap() - m_p_infinity()) + 0.5 * f64::ln(d);
    let r0 = (gap - ALPHA0).abs();
    let r1 = (gap - ALPHA0 - ALPHA1 / d).abs();
    let a = expansion_coeffs(1).unwrap().alpha;
    let coeff_err = (a[0] - ALPHA0).abs().max((a[1] - ALPHA1).abs());
    outcome(
        r0 < 0.01 && r1 * 10.0 <= r0 && coeff_err < 1e-6,
        format!("residual {r0:.2e} → {r1:.2e} with α₁/d; computed α₀, α₁ off by {coeff_err:.1e}"),
    )
}

fn c7_boyd() -> Outcome {
    let p = poly("z1 + z2 + 1", 2);
    let mut worst = 0f64;
    let mut vals = Vec::new();
    for d in [601i64, 602, 603] {
        let pa = substitute(&p, &SubstMatrix::new(vec![vec![1, d]]).unwrap()).unwrap();
        let diff = measure_univariate_exact(&pa).unwrap().value - mpd_exact(1).unwrap();
        let scaled = (d * d) as f64 * diff;
        let target = if d % 3 == 2 {
            -(3f64.sqrt()) * PI / 6.0
        } else {
            3f64.sqrt() * PI / 18.0
        };
        worst = worst.max((scaled - target).abs());
        vals.push(format!("{scaled:.5}"));
    }
    outcome(
        worst < 0.05,
        format!(
            "d²·diff = [{}], worst deviation {worst:.4}",
            vals.join(", ")
        ),
    )
}

fn c8_sublevel() -> Outcome {
    let battery = [("z1 - 1", 1), ("z1 + z2 + 1", 2), ("(z1 - 1)*(z2 - 1)", 2)];
    let mut fails = Vec::new();
    let mut tightest = f64::INFINITY;
    for (src, n) in battery {
        let p = poly(src, n);
        let s = p.stats().unwrap();
        for r in [0.01, 0.1, 0.5] {
            let mc = sublevel_measure(&p, r, 1_000_000, 8).unwrap();
            for alpha in [0.1, 0.5] {
                let b = sublevel_bound(&s, r, alpha).unwrap();
                tightest = tightest.min(b - mc.upper);
                if mc.upper > b {
                    fails.push(format!("{src} r={r} α={alpha}"));
                }
            }
        }
    }
    outcome(
        fails.is_empty(),
        format!("18 cases, min slack {tightest:.3}, failures {fails:?}"),
    )
}

fn c9_regularization() -> Outcome {
    let p = poly("z1 + z2 + 1", 2);
    let s = p.stats().unwrap();
    let mut pass = (s.linf - 1.0).abs() < 1e-15;
    let mut parts = Vec::new();
    for eps in [1e-2, 1e-3] {
        let f = TorusIntegrand::new(IntegrandKind::Regularized(eps), p.clone()).unwrap();
        let gap = integrate(&f, None, Rule::Quadrature { grid: 1024 }).unwrap() - SMYTH;
        let b = regularization_bound(&s, eps, 0.5).unwrap();
        pass &= gap <= b;
        parts.push(format!("ε={eps:.0e}: gap {gap:.3e} ≤ {b:.3e}"));
    }
    outcome(pass, parts.join(", "))
}

fn c10_lattice_sum() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, rho) in [(1usize, 5i64), (2, 4), (3, 3)] {
        let basis: Vec<Vec<i64>> = (0..d)
            .map(|i| (0..d).map(|j| if i == j { rho } else { 0 }).collect())
            .collect();
        let s = lattice_exp_sum(&basis, E, 1e-16).unwrap();
        let b = lattice_sum_bound(d, rho as f64, E);
        let qualifies = rho as f64 >= 2.0 * d as f64 / 3.0;
        pass &= qualifies && s <= b;
        parts.push(format!("d={d}: {s:.4e} ≤ {b:.4e}"));
        if d == 1 {
            let q = (-(rho as f64)).exp();
            let geom = 2.0 * q / (1.0 - q);
            pass &= (s - geom).abs() < 1e-12;
            parts.push(format!("geometric |Δ| = {:.1e}", (s - geom).abs()));
        }
    }
    outcome(pass, parts.join(", "))
}

fn c11_exponential_regime() -> Outcome {
    let p = poly("3 + z1 + z2", 2);
    let m = 3f64.ln();
    let ds = [10i64, 20, 30, 40, 50];
    let mut logs = Vec::new();
    let mut under_bound = true;
    let mut diffs = Vec::new();
    for &d in &ds {
        let a = SubstMatrix::new(vec![vec![1, d]]).unwrap();
        let diff = (measure_univariate_exact(&substitute(&p, &a).unwrap())
            .unwrap()
            .value
            - m)
            .abs();
        under_bound &= diff <= exponential_bound(&p, 0.2, a.rho().as_f64(), 1).unwrap();
        diffs.push(format!("{diff:.1e}"));
        logs.push(diff.ln());
    }
    // least-squares slope of log|diff| against d
    let xs: Vec<f64> = ds.iter().map(|&d| d as f64).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 5.0, logs.iter().sum::<f64>() / 5.0);
    let sxy: f64 = xs.iter().zip(&logs).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let monotone = logs.windows(2).all(|w| w[1] < w[0]);
    outcome(
        slope.is_finite() && slope <= -0.15 && monotone,
        format!(
            "|diff| = [{}], slope {slope:.3}, all below exponential bound: {under_bound}",
            diffs.join(", ")
        ),
    )
}

fn c12_constant_term() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst = 0f64;
    for _ in 0..10 {
        let k = rng.random_range(1..=5);
        let terms: Vec<(Vec<i64>, Complex64)> = (0..k)
            .map(|_| {
                let e = (0..3).map(|_| rng.random_range(0..=4)).collect();
                let c = Complex64::new(
                    rng.random_range(-3..=3) as f64,
                    rng.random_range(-3..=3) as f64,
                );
                (e, c)
            })
            .collect();
        let q = LaurentPoly::from_terms(3, terms).unwrap();
        let rows = (0..2)
            .map(|_| (0..3).map(|_| rng.random_range(-5..=5)).collect())
            .collect();
        let a = SubstMatrix::new(rows).unwrap();
        let lhs = if q.is_zero() {
            Complex64::new(0.0, 0.0)
        } else {
            substitute(&q, &a).unwrap().constant_term()
        };
        let diam = q.stats().map(|s| s.diam).unwrap_or(0);
        let rhs: Complex64 = a
            .lattice_points(diam)
            .unwrap()
            .iter()
            .map(|v| q.coeff(v))
            .sum();
        worst = worst.max((lhs - rhs).norm());
    }
    outcome(worst <= 1e-12, format!("10 cases, max |Δ| = {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 12] = [
        (
            "univariate exactness",
            Duration::from_secs(1),
            c1_univariate,
        ),
        (
            "two-variable Smyth value",
            Duration::from_secs(30),
            c2_smyth,
        ),
        ("limit value m(P_inf)", Duration::from_secs(60), c3_limit),
        ("rho(M_d) = d + 2", Duration::from_secs(5), c4_rho_md),
        (
            "leading term of m(P_d) - m(P_inf)",
            Duration::from_secs(10),
            c5_leading_term,
        ),
        (
            "expansion coefficients alpha_0, alpha_1",
            Duration::from_secs(10),
            c6_coefficients,
        ),
        (
            "3-periodic Boyd constants",
            Duration::from_secs(60),
            c7_boyd,
        ),
        (
            "sublevel bound domination",
            Duration::from_secs(120),
            c8_sublevel,
        ),
        (
            "regularization bound domination",
            Duration::from_secs(60),
            c9_regularization,
        ),
        (
            "lattice exponential sum bound",
            Duration::from_secs(5),
            c10_lattice_sum,
        ),
        (
            "exponential regime slope",
            Duration::from_secs(30),
            c11_exponential_regime,
        ),
        (
            "constant term by lattice enumeration",
            Duration::from_secs(5),
            c12_constant_term,
        ),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= *limit;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.2}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
