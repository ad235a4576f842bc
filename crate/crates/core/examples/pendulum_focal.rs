//! Pendulum focal decomposition by shooting over launch velocities.

use std::f64::consts::PI;

use focal_renorm::focal::numeric_grid;
use focal_renorm::PotentialSpec;

fn main() -> focal_renorm::Result<()> {
    let p = PotentialSpec::pendulum();
    let t_axis: Vec<f64> = (1..=72).map(|i| 3.0 * PI * i as f64 / 72.0).collect();
    let x_axis: Vec<f64> = (0..24).map(|j| -3.0 + 6.0 * (j as f64 + 0.5) / 24.0).collect();
    let grid = numeric_grid(&p, t_axis, x_axis, (-1.99, 1.99), 4000)?;
    for j in (0..grid.x_axis.len()).rev() {
        let row: String = (0..grid.t_axis.len())
            .map(|i| match grid.index(i, j).finite() {
                Some(0) => '.',
                Some(k) => char::from_digit(k.min(9), 10).unwrap(),
                None => '*',
            })
            .collect();
        println!("{:+.2} {row}", grid.x_axis[j]);
    }
    let maxima: Vec<u32> = (0..grid.t_axis.len()).map(|i| grid.column_max(i)).collect();
    println!("column maxima {maxima:?}");
    Ok(())
}
