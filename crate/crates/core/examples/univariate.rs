//! Exact measures of one-variable polynomials from their roots.

use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::{measure_univariate_exact, polynomial_roots};

fn main() -> torus_mahler::Result<()> {
    let lehmer = "z1^10 + z1^9 - z1^7 - z1^6 - z1^5 - z1^4 - z1^3 + z1 + 1";
    for src in [
        "z1 - 2",
        "3*z1^2 - 1",
        "z1^-2 + 5 + z1^2",
        lehmer,
        "1 + z1 + z1^400",
    ] {
        let p = LaurentPoly::parse(src, 1)?;
        let m = measure_univariate_exact(&p)?;
        println!("m({src}) = {:.15}  ({} roots)", m.value, m.work);
    }

    let (_, dense) = LaurentPoly::parse(lehmer, 1)?.univariate_coeffs()?;
    let outside: Vec<_> = polynomial_roots(&dense)?
        .into_iter()
        .filter(|r| r.norm() > 1.0 + 1e-9)
        .collect();
    println!("Lehmer's number: {:.12}", outside[0].norm());
    Ok(())
}
