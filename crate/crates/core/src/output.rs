//! CSV and PGM writers.
//!
//! Reals are written with 17 significant digits so that identical inputs
//! give byte-identical files.

use std::io::{self, Write};

use crate::dynamics::TrajectorySample;
use crate::focal::FocalGrid;
use crate::renorm::{ConvergenceCell, ConvergenceRow};

/// A real with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory<W: Write>(mut w: W, s: &TrajectorySample) -> io::Result<()> {
    writeln!(w, "t,x,xdot,energy")?;
    for i in 0..s.len() {
        writeln!(w, "{},{},{},{}", real(s.t[i]), real(s.x[i]), real(s.xdot[i]), real(s.energy[i]))?;
    }
    Ok(())
}

pub fn write_period_map<W: Write>(mut w: W, rows: &[(f64, f64)]) -> io::Result<()> {
    writeln!(w, "v,T")?;
    for &(v, t) in rows {
        writeln!(w, "{},{}", real(v), real(t))?;
    }
    Ok(())
}

pub fn write_convergence<W: Write>(mut w: W, rows: &[ConvergenceRow]) -> io::Result<()> {
    writeln!(w, "n,sup_error,window")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.n, real(r.sup_error), real(r.window))?;
    }
    Ok(())
}

pub fn write_convergence_cells<W: Write>(mut w: W, cells: &[ConvergenceCell]) -> io::Result<()> {
    writeln!(w, "n,v,t,x_n,X,abs_err")?;
    for c in cells {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            c.n,
            real(c.v),
            real(c.t),
            real(c.x_n),
            real(c.limit),
            real(c.abs_err)
        )?;
    }
    Ok(())
}

/// `t,x,index,flag`, time-major.
pub fn write_focal_csv<W: Write>(mut w: W, g: &FocalGrid) -> io::Result<()> {
    writeln!(w, "t,x,index,flag")?;
    for (i, &t) in g.t_axis.iter().enumerate() {
        for (j, &x) in g.x_axis.iter().enumerate() {
            let c = g.get(i, j);
            writeln!(w, "{},{},{},{}", real(t), real(x), c.index, c.confidence)?;
        }
    }
    Ok(())
}

/// Plain P2 image: time runs left to right, `x` bottom to top.
pub fn write_focal_pgm<W: Write>(mut w: W, g: &FocalGrid) -> io::Result<()> {
    let (width, height) = (g.t_axis.len(), g.x_axis.len());
    writeln!(w, "P2\n{width} {height}\n255")?;
    for j in (0..height).rev() {
        let row: Vec<String> = (0..width).map(|i| g.index(i, j).grey_level().to_string()).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}
