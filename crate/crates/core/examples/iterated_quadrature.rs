//! Several-variable measures by iterated quadrature, with Monte Carlo as a
//! cross-check.

use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::{inner_variable, measure_iterated, measure_mc};

fn main() -> torus_mahler::Result<()> {
    let cases = [
        ("1 + z1 + z2", 2, "Smyth: 3√3/(4π) L(χ₋₃, 2)"),
        ("1 + z1 + z2 + z3", 3, "7ζ(3)/(2π²)"),
        ("(1-z1)*(1-z2) - (1-z3)*(1-z4)", 4, "9ζ(3)/(2π²)"),
    ];
    for (src, n, note) in cases {
        let p = LaurentPoly::parse(src, n)?;
        let grid = if n == 2 {
            4096
        } else if n == 3 {
            512
        } else {
            64
        };
        let q = measure_iterated(&p, grid)?;
        let mc = measure_mc(&p, 400_000, 1)?;
        println!("{src}   [{note}]");
        println!(
            "  quadrature {:.8} ± {:.1e}  (grid {grid}, inner z{})",
            q.value,
            q.error_estimate,
            inner_variable(&p)? + 1
        );
        println!("  monte carlo {:.5} ± {:.1e}", mc.value, mc.error_estimate);
    }
    Ok(())
}
