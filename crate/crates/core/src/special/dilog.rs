use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use super::expansion::bernoulli_table;

/// Terms of the Bernoulli series. `|u| < 1.26` on the fold region and term
/// `n` decays like `(|u|/2π)ⁿ`.
const SERIES_TERMS: usize = 40;

/// `B_n / (n+1)!` for the series `Li₂(w) = Σ B_n uⁿ⁺¹/(n+1)!`,
/// `u = −log(1−w)`.
fn series_coeffs() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let b = bernoulli_table(SERIES_TERMS);
        let mut fact = 1.0f64;
        b.iter()
            .enumerate()
            .map(|(n, bn)| {
                fact *= (n + 1) as f64;
                bn.to_f64().expect("finite") / fact
            })
            .collect()
    })
}

/// `Li₂(w)` for `|w| ≤ 1`, `Re w ≤ ½`.
fn li2_folded(w: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - w).ln();
    let u2 = u * u;
    let c = series_coeffs();
    // B_1 is the only nonzero odd-index term
    let mut acc = u + c[1] * u2;
    let mut pow = u;
    for n in (2..c.len()).step_by(2) {
        pow *= u2;
        acc += c[n] * pow;
    }
    acc
}

/// Maps of the anharmonic group with the sign they give `D`.
fn images(z: Complex64) -> [(Complex64, f64); 6] {
    let one = Complex64::new(1.0, 0.0);
    [
        (z, 1.0),
        (one - z, -1.0),
        (z.inv(), -1.0),
        ((one - z).inv(), 1.0),
        ((z - one) / z, 1.0),
        (z / (z - one), -1.0),
    ]
}

/// Bloch–Wigner dilogarithm `D(z) = Im Li₂(z) + arg(1−z) log|z|`.
///
/// `z` is first moved into `{|w| ≤ 1, Re w ≤ ½}` by one of the six maps
/// `D(z) = D(1 − 1/z) = D(1/(1−z)) = −D(1/z) = −D(1−z) = −D(z/(z−1))`.
/// `D(0) = D(1) = 0`, and non-finite input gives 0 (the value at ∞).
pub fn bloch_wigner(z: Complex64) -> f64 {
    if !z.is_finite() || z == Complex64::new(0.0, 0.0) || z == Complex64::new(1.0, 0.0) {
        return 0.0;
    }
    let cands = images(z);
    let (w, sign) = cands
        .iter()
        .copied()
        .find(|(w, _)| w.norm() <= 1.0 && w.re <= 0.5)
        .unwrap_or_else(|| {
            *cands
                .iter()
                .min_by(|a, b| a.0.norm().total_cmp(&b.0.norm()))
                .expect("six images")
        });
    let one = Complex64::new(1.0, 0.0);
    let d = li2_folded(w).im + (one - w).arg() * w.norm().ln();
    sign * d
}
