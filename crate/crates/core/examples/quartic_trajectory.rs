//! Closed-form quartic orbits against adaptive integration and the
//! third-order small-velocity expansion.

use focal_renorm::dynamics::{exact_quartic_solution, quartic_params, solve_dense, third_order_approx};
use focal_renorm::potentials::{Ell, PotentialSpec};

fn main() -> focal_renorm::Result<()> {
    let v = 0.3;
    for ell in Ell::BOTH {
        let q = quartic_params(ell, v)?;
        println!(
            "ell {ell}: amplitude {:.12} lambda {:.12} m {:.12} period {:.12}",
            q.amplitude,
            q.lambda,
            q.m,
            q.period()?
        );
        let sol = solve_dense(&PotentialSpec::quartic(ell), v, 20.0, 1e-12)?;
        let (mut gap, mut approx) = (0.0f64, 0.0f64);
        for i in 0..=2000 {
            let t = 0.01 * i as f64;
            let exact = exact_quartic_solution(ell, v, t)?;
            gap = gap.max((sol.eval(t)[0] - exact).abs());
            approx = approx.max((third_order_approx(ell, v, t) - exact).abs());
        }
        println!("  sup |integrator - closed form| = {gap:.2e}");
        println!("  sup |third order - closed form| = {approx:.2e}");
    }
    Ok(())
}
