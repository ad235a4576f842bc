//! The period map `T(v)` and its small-velocity coefficient.

use std::f64::consts::PI;

use focal_renorm::period::{period, period_expansion_check, period_physical, turning_points};
use focal_renorm::renorm::uniform_grid;
use focal_renorm::PotentialSpec;

fn main() -> focal_renorm::Result<()> {
    for desc in ["quartic:+1", "quartic:-1", "pendulum"] {
        let p = PotentialSpec::parse(desc)?;
        let c = period_expansion_check(&p, &uniform_grid(0.01, 0.1, 10))?;
        println!("{desc}: T(v) - 2pi ~ {c:.5} v^2 (leading term {:.5})", -0.75 * PI * p.ell.sign());
        for v in [0.1, 0.3, 0.5] {
            let tp = turning_points(&p, v)?;
            println!("    v = {v}: T = {:.12}, turning points [{:.8}, {:.8}]", period(&p, v)?, tp.x_min, tp.x_max);
        }
    }
    let pendulum = PotentialSpec::pendulum();
    for nu in [0.2, 1.0, 1.9] {
        println!("pendulum, physical nu = {nu}: T = {:.12}", period_physical(&pendulum, nu)?);
    }
    Ok(())
}
