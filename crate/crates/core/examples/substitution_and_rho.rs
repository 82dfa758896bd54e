//! Monomial substitutions `P ↦ P_A` and the kernel lattice parameter `ρ(A)`.

use torus_mahler::lattice::{substitute, SubstMatrix};
use torus_mahler::laurent::LaurentPoly;
use torus_mahler::special::{md_matrix, p_infinity};

fn main() -> torus_mahler::Result<()> {
    let a = SubstMatrix::parse("1 0 3; 0 1 5")?;
    println!("A = {a}");
    for v in a.kernel_basis() {
        println!("  kernel generator {v:?}");
    }
    println!("  ρ(A) = {}, shortest {:?}", a.rho(), a.shortest_vector());

    let p = LaurentPoly::parse("z1 + z2 + z3 - 1", 3)?;
    println!("P   = {p}");
    println!("P_A = {}", substitute(&p, &a)?);

    // the kernel decides which terms collide: constant term of P_A
    let q = LaurentPoly::parse("z1^3*z2^5 + 2*z3 + 7", 3)?;
    let qa = substitute(&q, &a)?;
    println!("Q_A = {qa}  (constant term {})", qa.constant_term());

    for d in [0u32, 1, 5, 20] {
        let m = md_matrix(d);
        let pa = substitute(&p_infinity(), &m)?;
        println!("M_{d}: ρ = {}, (P_∞)_M has {} terms", m.rho(), pa.len());
    }
    Ok(())
}
