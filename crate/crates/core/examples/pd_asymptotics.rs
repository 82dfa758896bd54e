//! `m(P_d)` for `P_d = Σ_{i+j≤d} z1^i z2^j`: closed form, expansion in `1/d`,
//! and the limit `m(P_∞)`.

use torus_mahler::special::{
    expansion_coeffs, m_p_infinity, mpd_asymptotic_with, mpd_exact, substitution_identity_check,
};

fn main() -> torus_mahler::Result<()> {
    let coeffs = expansion_coeffs(6)?;
    for (k, a) in coeffs.alpha.iter().enumerate() {
        println!("α_{k} = {a:+.12}");
    }
    println!("m(P_∞) = {:.15}", m_p_infinity());
    println!();
    println!("    d  exact              K=6 residual");
    for d in [2u32, 5, 10, 50, 100, 400, 1000] {
        let e = mpd_exact(d)?;
        println!(
            "{d:>5}  {e:.15}  {:+.2e}",
            e - mpd_asymptotic_with(&coeffs, d)?
        );
    }

    let check = substitution_identity_check(3, 4096)?;
    println!();
    println!(
        "d = 3: quadrature of (P_∞)_M = {:.8}, closed form {:.8}",
        check.measured.value, check.exact
    );
    Ok(())
}
