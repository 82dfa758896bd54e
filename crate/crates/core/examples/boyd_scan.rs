//! `d²(m(1 + z + z^d) − m(1 + z1 + z2))` settles onto a 3-periodic pattern.
//! Also writes the same sweep as CSV through the scan driver.

use std::f64::consts::PI;

use torus_mahler::cli::{run_scan, MatrixTemplate, MethodChoice, ScanSpec};
use torus_mahler::lattice::substitute;
use torus_mahler::laurent::LaurentPoly;
use torus_mahler::mahler::measure_univariate_exact;

fn main() -> torus_mahler::Result<()> {
    let p = LaurentPoly::parse("1 + z1 + z2", 2)?;
    let m = 0.32306594721945053;
    let template = MatrixTemplate::parse("1 d")?;
    let limit = |d: i64| {
        if d % 3 == 2 {
            -(3f64.sqrt()) * PI / 6.0
        } else {
            3f64.sqrt() * PI / 18.0
        }
    };
    println!("   d   d²·diff      limit");
    for d in [30i64, 31, 32, 300, 301, 302, 1200, 1201, 1202] {
        let pa = substitute(&p, &template.at(d)?)?;
        let diff = measure_univariate_exact(&pa)?.value - m;
        let df = d as f64;
        println!("{d:>5}  {:>9.5}  {:>9.5}", df * df * diff, limit(d));
    }

    let spec = ScanSpec {
        poly: p,
        template,
        from: 10,
        to: 15,
        step: 1,
        method: MethodChoice::Auto,
        grid: 2048,
        samples: 0,
        seed: 0,
    };
    println!();
    run_scan(&spec, &mut std::io::stdout(), &Default::default(), true)?;
    Ok(())
}
