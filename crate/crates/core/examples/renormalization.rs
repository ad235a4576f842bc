//! Renormalized trajectories converging to `v sin(ℓt(v² - 1))`.
//!
//! Prints the sup-error table for three potentials and the distance
//! between the scaling velocity and its explicit approximation.

use focal_renorm::renorm::{convergence_experiment, scaling_parameter, scaling_velocity, ConvergenceSetup};
use focal_renorm::PotentialSpec;

fn main() -> focal_renorm::Result<()> {
    let setup = ConvergenceSetup::new(0.2, vec![100, 1000, 10_000, 100_000]);
    for desc in ["quartic:+1", "quartic:-1", "pendulum", "perturbed:-1"] {
        let p = PotentialSpec::parse(desc)?;
        let (rows, _) = convergence_experiment(&p, &setup)?;
        println!("{desc}");
        for r in &rows {
            println!("    n = {:>6}  window = {:.4}  sup error = {:.3e}", r.n, r.window, r.sup_error);
        }
        let (n, t) = (1000, 1.0);
        let g = scaling_velocity(&p, n, t)?;
        let gp = scaling_parameter(n, t);
        println!("    gamma = {g:.10}, Gamma = {gp:.10} at n = {n}, t = {t}");
    }
    Ok(())
}
