//! Compares root counts of `x_n(·; t) = x` with the asymptotic index.

use std::f64::consts::PI;

use focal_renorm::focal::{asymptotic_index, renormalized_index};
use focal_renorm::potentials::{Ell, PotentialSpec};

fn main() -> focal_renorm::Result<()> {
    let p = PotentialSpec::quartic(Ell::Minus);
    let cells = [(PI / 2.0, 0.0), (1.5 * PI, 0.0), (PI / 2.0, 0.05), (1.5 * PI, 0.3), (2.5 * PI, -0.2)];
    for n in [100, 10_000] {
        for &(t, x) in &cells {
            let renorm = renormalized_index(&p, n, t, x, 4001)?;
            let limit = asymptotic_index(Ell::Minus, t, x);
            println!(
                "n = {n:>5}  t = {:.2}pi  x = {x:+.2}:  renormalized {} ({}), asymptotic {}",
                t / PI,
                renorm.index,
                renorm.confidence,
                limit.index
            );
        }
    }
    Ok(())
}
