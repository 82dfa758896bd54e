//! `½∫ log(|P|² + ε)` approaches `m(P)` from above as `ε → 0`, also through
//! a pushforward measure.

use torus_mahler::bounds::regularization_bound;
use torus_mahler::lattice::SubstMatrix;
use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::{integrate, measure, IntegrandKind, Rule, TorusIntegrand};

fn main() -> torus_mahler::Result<()> {
    let p = LaurentPoly::parse("1 + z1 + z2", 2)?;
    let m = measure(&p, 2048)?.value;
    let s = p.stats()?;
    let rule = Rule::Quadrature { grid: 1024 };
    println!("m(P) = {m:.10}");
    for eps in [1e-1, 1e-2, 1e-3, 1e-4] {
        let f = TorusIntegrand::new(IntegrandKind::Regularized(eps), p.clone())?;
        let gap = integrate(&f, None, rule)? - m;
        println!(
            "ε = {eps:.0e}: gap {gap:.3e}, bound {:.3e}",
            regularization_bound(&s, eps, 0.5)?
        );
    }

    // ∫ log|P| dμ_A = m(P_A)
    let a = SubstMatrix::parse("1 7")?;
    let f = TorusIntegrand::new(IntegrandKind::LogAbs, p)?;
    let via_mu = integrate(&f, Some(&a), rule)?;
    let mc = integrate(
        &f,
        Some(&a),
        Rule::MonteCarlo {
            samples: 200_000,
            seed: 11,
        },
    )?;
    println!("∫ log|P| dμ_A for A = (1 7): {via_mu:.10} (monte carlo {mc:.4})");
    Ok(())
}
