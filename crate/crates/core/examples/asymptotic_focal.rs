//! The universal focal decomposition as text, optionally also as PGM.
//!
//! `cargo run --example asymptotic_focal -- out.pgm`

use std::f64::consts::PI;
use std::fs::File;
use std::io::BufWriter;

use focal_renorm::focal::{asymptotic_grid, FocalIndex};
use focal_renorm::output::write_focal_pgm;
use focal_renorm::potentials::Ell;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = asymptotic_grid(Ell::Minus, (0.0, 3.0 * PI), (-1.0, 1.0), 96, 31)?;
    for j in (0..grid.x_axis.len()).rev() {
        let row: String = (0..grid.t_axis.len())
            .map(|i| match grid.index(i, j) {
                FocalIndex::Finite(0) => '.',
                FocalIndex::Finite(k) => char::from_digit(k.min(9), 10).unwrap(),
                FocalIndex::Infinite => '*',
            })
            .collect();
        println!("{:+.2} {row}", grid.x_axis[j]);
    }
    if let Some(path) = std::env::args().nth(1) {
        let fine = asymptotic_grid(Ell::Minus, (0.0, 3.0 * PI), (-1.0, 1.0), 512, 256)?;
        write_focal_pgm(BufWriter::new(File::create(&path)?), &fine)?;
        println!("wrote {path}");
    }
    Ok(())
}
