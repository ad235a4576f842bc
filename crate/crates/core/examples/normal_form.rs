//! Reducing physical potentials to `½x² + (ℓ/4)x⁴ + O(x⁵)`.

use focal_renorm::PotentialSpec;

fn main() -> focal_renorm::Result<()> {
    for desc in ["pendulum", "quartic:-1", "perturbed:+1:c5=0.2", "poly:1.5,-4,4,-2,0.5"] {
        let p = PotentialSpec::parse(desc)?;
        println!(
            "{desc:<22} q* = {:+.6} omega = {:.6} mu = {:.6} ell = {:+} band = {:.6}",
            p.q_star,
            p.omega,
            p.mu,
            p.ell.sign(),
            p.v_max
        );
        for x in [0.05f64, 0.1, 0.2] {
            let quartic = 0.5 * x * x + 0.25 * p.ell.sign() * x.powi(4);
            println!("    V({x}) - quartic = {:+.3e}", p.value(x) - quartic);
        }
    }
    Ok(())
}
