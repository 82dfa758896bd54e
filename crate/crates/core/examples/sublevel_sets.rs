//! Monte Carlo volumes of `{|P| ≤ r}` with 99% Wilson intervals, against the
//! analytic bound.

use torus_mahler::bounds::sublevel_bound;
use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::sublevel_measure;

fn main() -> torus_mahler::Result<()> {
    for (src, n) in [("z1 - 1", 1), ("1 + z1 + z2", 2), ("(z1 - 1)*(z2 - 1)", 2)] {
        let p = LaurentPoly::parse(src, n)?;
        let s = p.stats()?;
        println!("{src}");
        for r in [0.01, 0.1, 0.5] {
            let est = sublevel_measure(&p, r, 200_000, 5)?;
            println!(
                "  r = {r:<5} vol ≈ {:.5} [{:.5}, {:.5}]   bound(α=0.5) {:.4}",
                est.estimate,
                est.lower,
                est.upper,
                sublevel_bound(&s, r, 0.5)?
            );
        }
    }
    Ok(())
}
