use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{MeasureResult, Method};
use crate::laurent::LaurentPoly;
use crate::{Error, Result};

/// Samples per independent stream. Each chunk owns its stream, so results
/// do not depend on the thread count.
const CHUNK: usize = 1 << 14;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.5758293035489;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(&mut self, other: &Welford) {
        if other.count == 0 {
            return;
        }
        let n = self.count + other.count;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n as f64;
        self.m2 += other.m2 + d * d * (self.count as f64 * other.count as f64) / n as f64;
        self.count = n;
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
}

/// Mean of `f` at `samples` uniform points of `Tⁿ`; `None` and non-finite
/// values are dropped.
pub(crate) fn sample_mean<F>(n: usize, samples: usize, seed: u64, f: F) -> SampleStats
where
    F: Fn(&[f64]) -> Option<f64> + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<Welford> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(samples - c * CHUNK);
            let mut w = Welford::default();
            let mut angles = vec![0.0; n];
            for _ in 0..len {
                for a in angles.iter_mut() {
                    *a = TAU * rng.random::<f64>();
                }
                match f(&angles) {
                    Some(v) if v.is_finite() => w.push(v),
                    _ => {}
                }
            }
            w
        })
        .collect();
    let mut total = Welford::default();
    for w in &parts {
        total.merge(w);
    }
    let var = if total.count > 1 {
        total.m2 / (total.count - 1) as f64
    } else {
        0.0
    };
    SampleStats {
        mean: total.mean,
        stderr: (var / total.count.max(1) as f64).sqrt(),
        count: total.count,
    }
}

/// Monte Carlo estimate of `m(P)` with a three-standard-error band.
/// Deterministic for a given seed.
pub fn measure_mc(p: &LaurentPoly, samples: usize, seed: u64) -> Result<MeasureResult> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if samples < 2 {
        return Err(Error::precondition("Monte Carlo needs at least 2 samples"));
    }
    let s = sample_mean(p.nvars(), samples, seed, |t| {
        Some(p.eval_torus(t).expect("dimension checked").norm().ln())
    });
    Ok(MeasureResult {
        value: s.mean,
        method: Method::MonteCarlo,
        error_estimate: 3.0 * s.stderr,
        work: s.count,
    })
}

/// Haar measure of `{|P| ≤ r}` with a 99% Wilson score interval.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SublevelEstimate {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    pub samples: u64,
}

pub fn sublevel_measure(
    p: &LaurentPoly,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<SublevelEstimate> {
    if !(r >= 0.0) {
        return Err(Error::precondition("sublevel threshold needs r ≥ 0"));
    }
    if samples == 0 {
        return Err(Error::precondition("sublevel estimate needs samples"));
    }
    let s = sample_mean(p.nvars(), samples, seed, |t| {
        let v = p.eval_torus(t).expect("dimension checked").norm();
        Some(f64::from(u8::from(v <= r)))
    });
    let n = s.count as f64;
    let phat = s.mean;
    let z2 = Z99 * Z99;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z99 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    Ok(SublevelEstimate {
        estimate: phat,
        lower: (centre - half).max(0.0),
        upper: (centre + half).min(1.0),
        samples: s.count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n).unwrap()
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let p = poly("1 + z1 + z2", 2);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| measure_mc(&p, 100_000, 42).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert!((a.value - 0.32306594721945053).abs() < a.error_estimate);
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut one = Welford::default();
        xs.iter().for_each(|&x| one.push(x));
        let mut a = Welford::default();
        let mut b = Welford::default();
        xs[..333].iter().for_each(|&x| a.push(x));
        xs[333..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.mean - one.mean).abs() < 1e-12);
        assert!((a.m2 - one.m2).abs() < 1e-9 * one.m2);
    }

    #[test]
    fn sublevel_of_linear_factor() {
        // |1 - e^{iθ}| = 2|sin(θ/2)| ≤ 0.1 on a set of measure (2/π)·asin(0.05)
        let exact = 2.0 / std::f64::consts::PI * 0.05f64.asin();
        let s = sublevel_measure(&poly("1 - z1", 1), 0.1, 400_000, 3).unwrap();
        assert!(s.lower <= exact && exact <= s.upper, "{s:?} vs {exact}");
        assert!((exact - 0.0318442664733207).abs() < 1e-12);
        assert!(sublevel_measure(&poly("1 - z1", 1), -1.0, 10, 3).is_err());
    }
}
