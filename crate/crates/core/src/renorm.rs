//! The renormalization scheme.
//!
//! For step `n` and shifted time `t`, the scaling parameter is
//! `Γ = √(8t/(3πn))` and the renormalized trajectory is
//! `x_n(v; t) = (-1)ⁿ Γ⁻¹ x(Γv; nπ - ℓt)`. Its limit is the universal
//! `X_ℓ(v; t) = v sin(ℓt(v² - 1))`.
//!
//! Long times are never integrated directly: `nπ - ℓt` is reduced modulo
//! the period `T(Γv)` first, or the elliptic closed form is used for pure
//! quartics.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::dynamics::{exact_quartic_solution, solve_dense};
use crate::error::{Error, Result};
use crate::period::{period, period_with_tol};
use crate::potentials::{Ell, PotentialKind, PotentialSpec};
use crate::roots::brent;

/// Admissible times satisfy `t ≤ K·n` with this `K`.
pub const DEFAULT_WINDOW_K: f64 = 0.1;

/// Integration tolerance used on the period-reduced time.
pub const REDUCED_TOL: f64 = 1e-12;

/// `Γ_{n,t} = √(8t/(3πn))`.
pub fn scaling_parameter(n: u64, t: f64) -> f64 {
    (8.0 * t / (3.0 * PI * n as f64)).sqrt()
}

/// `R_{ℓ,v,t} = -ℓt(1 - v²)`.
pub fn phase_remainder(ell: Ell, v: f64, t: f64) -> f64 {
    -ell.sign() * t * (1.0 - v * v)
}

/// `X_ℓ(v; t) = v sin(ℓt(v² - 1))`.
pub fn asymptotic_trajectory(ell: Ell, v: f64, t: f64) -> f64 {
    v * (ell.sign() * t * (v * v - 1.0)).sin()
}

fn check_window(n: u64, t: f64, k: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Window("n must be at least 1".into()));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::Window(format!("t = {t} must be finite and non-negative")));
    }
    let window = k * n as f64;
    if t > window {
        return Err(Error::Window(format!("t = {t} exceeds the window K·n = {window} for n = {n}")));
    }
    Ok(window)
}

/// Scaling data for one `(n, t)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingContext {
    pub n: u64,
    pub t: f64,
    pub ell: Ell,
    /// `Γ_{n,t}`.
    pub gamma_param: f64,
    /// `γ_{n,t}`, solving `T(γ) = 2π - 2ℓt/n`.
    pub gamma_vel: f64,
    /// Upper bound `K·n` on admissible `t`.
    pub valid_window: f64,
}

impl ScalingContext {
    pub fn new(p: &PotentialSpec, n: u64, t: f64) -> Result<Self> {
        let valid_window = check_window(n, t, DEFAULT_WINDOW_K)?;
        Ok(ScalingContext {
            n,
            t,
            ell: p.ell,
            gamma_param: scaling_parameter(n, t),
            gamma_vel: scaling_velocity(p, n, t)?,
            valid_window,
        })
    }

    /// `R_{ℓ,v,t}` for this context.
    pub fn phase_remainder(&self, v: f64) -> f64 {
        phase_remainder(self.ell, v, self.t)
    }
}

/// The positive `γ` with `T(γ) = 2π - 2ℓt/n`, on the monotone branch of `T`.
pub fn scaling_velocity(p: &PotentialSpec, n: u64, t: f64) -> Result<f64> {
    check_window(n, t, DEFAULT_WINDOW_K)?;
    if t == 0.0 {
        return Ok(0.0);
    }
    let target = 2.0 * PI - 2.0 * p.ell.sign() * t / n as f64;
    let f = |v: f64| period(p, v).map(|tv| tv - target);
    let cap = if p.v_max.is_finite() { p.v_max * (1.0 - 1e-9) } else { f64::INFINITY };
    let mut hi = (2.0 * scaling_parameter(n, t)).min(0.5 * cap);
    let sign_lo = p.ell.sign(); // T(0) - target = 2ℓt/n
    let mut tries = 0;
    loop {
        let fh = f(hi)?;
        if fh * sign_lo < 0.0 {
            break;
        }
        if hi >= cap || tries > 80 {
            return Err(Error::Window(format!(
                "target period {target} is outside the range of T on [0, v_max) (t = {t}, n = {n})"
            )));
        }
        hi = (hi * 1.5).min(cap);
        tries += 1;
    }
    brent(|v| f(v).unwrap_or(f64::NAN), 0.0, hi, 1e-16)
}

/// `Γ⁻¹ x(Γv; nπ - ℓt)` without the `(-1)ⁿ` factor.
pub fn renormalized_unsigned(p: &PotentialSpec, n: u64, v: f64, t: f64) -> Result<f64> {
    check_window(n, t, DEFAULT_WINDOW_K)?;
    if !(-1.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("v = {v} must lie in [-1, 1]")));
    }
    if t == 0.0 || v == 0.0 {
        return Ok(0.0);
    }
    let gamma = scaling_parameter(n, t);
    let w = gamma * v;
    p.check_band(w)?;
    let time = n as f64 * PI - p.ell.sign() * t;
    let x = match p.kind {
        PotentialKind::Quartic(ell) => exact_quartic_solution(ell, w, time)?,
        _ => {
            let tol = if n > 10_000 { 1e-13 } else { 1e-12 };
            let period = period_with_tol(p, w, tol)?;
            let reduced = time.rem_euclid(period);
            solve_dense(p, w, reduced, REDUCED_TOL)?.final_state()[0]
        }
    };
    Ok(x / gamma)
}

/// `x_n(v; t) = (-1)ⁿ Γ⁻¹ x(Γv; nπ - ℓt)`; zero at `t = 0`.
pub fn renormalized_trajectory(p: &PotentialSpec, n: u64, v: f64, t: f64) -> Result<f64> {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    renormalized_unsigned(p, n, v, t).map(|x| sign * x)
}

/// One cell of a convergence experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceCell {
    pub n: u64,
    pub v: f64,
    pub t: f64,
    pub x_n: f64,
    pub limit: f64,
    pub abs_err: f64,
}

/// Per-`n` summary of a convergence experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub sup_error: f64,
    /// Largest sampled time `K·n^{1/3-ε}`.
    pub window: f64,
}

/// Grid and constants of a convergence experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSetup {
    pub eps: f64,
    pub n_list: Vec<u64>,
    pub v_grid: Vec<f64>,
    pub t_samples: usize,
    /// Constant in the time window `[0, K·n^{1/3-ε}]`.
    pub window_k: f64,
}

impl ConvergenceSetup {
    /// `v ∈ {-1, -0.9, ..., 1}`, 64 time samples, `K = 0.1`.
    pub fn new(eps: f64, n_list: Vec<u64>) -> Self {
        ConvergenceSetup {
            eps,
            n_list,
            v_grid: uniform_grid(-1.0, 1.0, 21),
            t_samples: 64,
            window_k: DEFAULT_WINDOW_K,
        }
    }
}

/// `count` evenly spaced points from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    b
                } else {
                    a + (b - a) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Runs the experiment, returning the per-`n` table and every cell.
pub fn convergence_experiment(
    p: &PotentialSpec,
    setup: &ConvergenceSetup,
) -> Result<(Vec<ConvergenceRow>, Vec<ConvergenceCell>)> {
    if !(setup.eps > 0.0 && setup.eps < 1.0 / 3.0) {
        return Err(Error::Domain(format!("eps = {} must lie in (0, 1/3)", setup.eps)));
    }
    if setup.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("n_list must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(setup.n_list.len());
    let mut cells = Vec::new();
    for &n in &setup.n_list {
        let window = setup.window_k * (n as f64).powf(1.0 / 3.0 - setup.eps);
        let times = uniform_grid(0.0, window, setup.t_samples);
        let grid: Vec<(f64, f64)> = setup
            .v_grid
            .iter()
            .flat_map(|&v| times.iter().map(move |&t| (v, t)))
            .collect();
        let row_cells = grid
            .par_iter()
            .map(|&(v, t)| {
                let x_n = renormalized_trajectory(p, n, v, t)?;
                let limit = asymptotic_trajectory(p.ell, v, t);
                Ok(ConvergenceCell { n, v, t, x_n, limit, abs_err: (x_n - limit).abs() })
            })
            .collect::<Result<Vec<_>>>()?;
        let sup_error = row_cells.iter().map(|c| c.abs_err).fold(0.0, f64::max);
        rows.push(ConvergenceRow { n, sup_error, window });
        cells.extend(row_cells);
    }
    Ok((rows, cells))
}
