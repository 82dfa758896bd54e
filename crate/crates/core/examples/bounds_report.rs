//! Evaluates the explicit error bounds for a few polynomials.

use torus_mahler::bounds::{delta_eps, exponential_bound, main_error_bound, rho0};
use torus_mahler::lattice::{substitute, SubstMatrix};
use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::measure;

fn main() -> torus_mahler::Result<()> {
    let p = LaurentPoly::parse("1 + z1 + z2", 2)?;
    let s = p.stats()?;
    println!(
        "{p}: k = {}, κ = {}, diam = {}, L1 = {}",
        s.k, s.kappa, s.diam, s.l1
    );
    let r0 = rho0(&s)?;
    println!("ρ₀ = {r0:.6e}");
    for rho in [r0, 1e10, 1e20] {
        let rep = main_error_bound(&s, rho)?;
        println!(
            "ρ = {rho:.3e}: bound {:.6e} (applicable {})",
            rep.bound_value, rep.applicable
        );
        for (k, v) in &rep.components {
            println!("    {k} = {v:.6e}");
        }
    }
    println!("δ_ε at ε = 0.01: {:.6}", delta_eps(&s, 0.01)?);

    // no torus zeros: exponential decay of the gap
    let q = LaurentPoly::parse("3 + z1 + z2", 2)?;
    let mq = 3f64.ln();
    for d in [5i64, 10, 20] {
        let a = SubstMatrix::new(vec![vec![1, d]])?;
        let gap = (measure(&substitute(&q, &a)?, 0)?.value - mq).abs();
        let b = exponential_bound(&q, 0.2, a.rho().as_f64(), 1)?;
        println!("3 + z1 + z2, d = {d}: gap {gap:.2e} ≤ {b:.2e}");
    }
    Ok(())
}
