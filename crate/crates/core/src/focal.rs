//! Focal-decomposition indices with base point `(0, 0)`.
//!
//! The index of an end point `(t, x)` is the number of trajectories from the
//! origin that reach `x` at time `t`, i.e. the number of launch velocities
//! solving the two-point boundary value problem. For the universal limit
//! `X_ℓ(v; t) = v sin(ℓt(v² - 1))` roots are counted exactly, branch by
//! branch; for concrete potentials they are counted by shooting.

use std::f64::consts::PI;
use std::fmt;

use rayon::prelude::*;

use crate::dynamics::{exact_quartic_solution, solve_dense};
use crate::error::{Error, Result};
use crate::potentials::{Ell, PotentialKind, PotentialSpec};
use crate::renorm::{asymptotic_trajectory, renormalized_trajectory, uniform_grid};
use crate::roots::bisect;

/// Extremum-to-target distance below which a cell is a tangency candidate.
pub const TANGENCY_TOL: f64 = 1e-9;

/// Sample-to-target distance below which a shooting count is flagged.
pub const SHOOTING_TOL: f64 = 1e-7;

/// Number of solutions, or `σ∞` at the base point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FocalIndex {
    Finite(u32),
    Infinite,
}

impl FocalIndex {
    pub fn finite(self) -> Option<u32> {
        match self {
            FocalIndex::Finite(i) => Some(i),
            FocalIndex::Infinite => None,
        }
    }

    /// Grey level for PGM output: `20·i` capped at 240, `255` for `∞`.
    pub fn grey_level(self) -> u8 {
        match self {
            FocalIndex::Finite(i) => (20 * i.min(12)) as u8,
            FocalIndex::Infinite => 255,
        }
    }
}

impl fmt::Display for FocalIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FocalIndex::Finite(i) => write!(f, "{i}"),
            FocalIndex::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Confidence {
    Certain,
    NearBoundary,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Certain => "certain",
            Confidence::NearBoundary => "near-boundary",
        })
    }
}

/// An index with its confidence flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexValue {
    pub index: FocalIndex,
    pub confidence: Confidence,
}

impl IndexValue {
    fn certain(i: u32) -> Self {
        IndexValue { index: FocalIndex::Finite(i), confidence: Confidence::Certain }
    }
}

/// Critical points of `h(v) = v sin(ℓt(v² - 1))` in `(0, 1)`, ascending.
///
/// `h` is odd, so the critical set is symmetric; `v = 0` is never a sign
/// change of `h'` because `h'` is even.
fn critical_points(ell: Ell, t: f64) -> Vec<f64> {
    let l = ell.sign();
    let dh = |v: f64| {
        let (s, c) = (l * t * (v * v - 1.0)).sin_cos();
        s + 2.0 * l * t * v * v * c
    };
    let samples = ((400.0 * t).ceil() as usize).max(2000);
    let mut out = Vec::new();
    let mut v0 = 0.0;
    let mut d0 = dh(v0);
    for i in 1..samples {
        let v1 = i as f64 / samples as f64;
        let d1 = dh(v1);
        if d1 == 0.0 {
            out.push(v1);
        } else if d0 != 0.0 && d0.signum() != d1.signum() {
            out.push(bisect(dh, v0, v1, 60));
        }
        v0 = v1;
        d0 = d1;
    }
    // h'(1) = 2ℓt ≠ 0, so the last interval cannot hide a sign change.
    out
}

/// Monotone branches of `X_ℓ(·; t)` on `(-1, 1)` for one fixed `t > 0`.
#[derive(Debug, Clone)]
pub struct Branches {
    t: f64,
    /// Branch end points `(v, h(v))`: -1, the critical points, 1.
    knots: Vec<(f64, f64)>,
}

impl Branches {
    pub fn new(ell: Ell, t: f64) -> Self {
        let crit = critical_points(ell, t);
        let mut knots = Vec::with_capacity(2 * crit.len() + 2);
        knots.push((-1.0, 0.0));
        for &c in crit.iter().rev() {
            knots.push((-c, asymptotic_trajectory(ell, -c, t)));
        }
        for &c in &crit {
            knots.push((c, asymptotic_trajectory(ell, c, t)));
        }
        knots.push((1.0, 0.0));
        Branches { t, knots }
    }

    /// Number of branches crossing `x`, at most one each.
    pub fn count(&self, x: f64) -> IndexValue {
        if x.abs() >= 1.0 {
            return IndexValue::certain(0);
        }
        let mut flagged = false;
        let value = |k: &(f64, f64), interior: bool, flagged: &mut bool| {
            if interior && (k.1 - x).abs() <= TANGENCY_TOL {
                *flagged = true;
                x
            } else {
                k.1
            }
        };
        let last = self.knots.len() - 1;
        let mut count = 0;
        let mut prev = value(&self.knots[0], false, &mut flagged);
        for (i, k) in self.knots.iter().enumerate().skip(1) {
            let cur = value(k, i != last, &mut flagged);
            if prev.min(cur) < x && x < prev.max(cur) {
                count += 1;
            }
            prev = cur;
        }
        // The cusp points (kπ, 0) sit where new root pairs are born.
        if x.abs() <= TANGENCY_TOL {
            let k = (self.t / PI).round();
            if k >= 1.0 && (self.t - k * PI).abs() <= 1e-9 * self.t.max(1.0) {
                flagged = true;
            }
        }
        IndexValue {
            index: FocalIndex::Finite(count),
            confidence: if flagged { Confidence::NearBoundary } else { Confidence::Certain },
        }
    }
}

/// Number of `v ∈ (-1, 1)` with `X_ℓ(v; t) = x`.
///
/// `(0, 0)` is `σ∞`. Extrema within [`TANGENCY_TOL`] of `x` are treated as not
/// reaching `x` (the lower-index side) and flag the cell.
pub fn asymptotic_index(ell: Ell, t: f64, x: f64) -> IndexValue {
    if t == 0.0 {
        return if x == 0.0 {
            IndexValue { index: FocalIndex::Infinite, confidence: Confidence::Certain }
        } else {
            IndexValue::certain(0)
        };
    }
    if x.abs() >= 1.0 {
        return IndexValue::certain(0);
    }
    Branches::new(ell, t).count(x)
}

/// A rectangular `(t, x)` lattice of focal indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FocalGrid {
    pub t_axis: Vec<f64>,
    pub x_axis: Vec<f64>,
    /// Row-major by time: `cells[i * x_axis.len() + j]` is `(t_i, x_j)`.
    pub cells: Vec<IndexValue>,
}

impl FocalGrid {
    pub fn get(&self, it: usize, jx: usize) -> IndexValue {
        self.cells[it * self.x_axis.len() + jx]
    }

    pub fn index(&self, it: usize, jx: usize) -> FocalIndex {
        self.get(it, jx).index
    }

    /// Largest finite index in the column at `t_axis[it]`.
    pub fn column_max(&self, it: usize) -> u32 {
        (0..self.x_axis.len())
            .filter_map(|j| self.index(it, j).finite())
            .max()
            .unwrap_or(0)
    }

    /// Distinct finite indices present in the grid.
    pub fn present_indices(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cells.iter().filter_map(|c| c.index.finite()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// Asymptotic decomposition on `[t0, t1] × [x0, x1]`, end points included.
pub fn asymptotic_grid(
    ell: Ell,
    t_range: (f64, f64),
    x_range: (f64, f64),
    t_steps: usize,
    x_steps: usize,
) -> Result<FocalGrid> {
    if t_steps < 2 || x_steps < 2 {
        return Err(Error::Domain("grid resolution must be at least 2 in each axis".into()));
    }
    let t_axis = uniform_grid(t_range.0, t_range.1, t_steps);
    let x_axis = uniform_grid(x_range.0, x_range.1, x_steps);
    let cells = t_axis
        .par_iter()
        .flat_map_iter(|&t| {
            let branches = (t != 0.0).then(|| Branches::new(ell, t));
            x_axis
                .iter()
                .map(|&x| match &branches {
                    Some(b) => b.count(x),
                    None => asymptotic_index(ell, 0.0, x),
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(FocalGrid { t_axis, x_axis, cells })
}

/// Physical position `q(ν; τ)` from the origin-launched orbit.
fn physical_position(p: &PotentialSpec, nu: f64, tau: f64) -> Result<f64> {
    let (_, s, v) = p.to_normalized(p.q_star, tau, nu);
    let x = if v == 0.0 {
        0.0
    } else if let PotentialKind::Quartic(ell) = p.kind {
        exact_quartic_solution(ell, v, s)?
    } else {
        solve_dense(p, v, s, 1e-11)?.final_state()[0]
    };
    Ok(p.mu * x + p.q_star)
}

/// Counts sign changes of `values - target` (zeros skipped) and flags the
/// scan when a sample is within `tol` of the target or a discrete extremum
/// comes closer to the target than the local sample spread.
fn scan_count(values: &[f64], target: f64, tol: f64) -> (Vec<usize>, bool) {
    let f: Vec<f64> = values.iter().map(|v| v - target).collect();
    let mut brackets = Vec::new();
    let mut flagged = false;
    let mut last: Option<(usize, f64)> = None;
    for (i, &fi) in f.iter().enumerate() {
        if fi.abs() < tol {
            flagged = true;
        }
        if fi == 0.0 {
            continue;
        }
        if let Some((j, fj)) = last {
            if fj.signum() != fi.signum() {
                brackets.push(j);
            }
        }
        last = Some((i, fi));
    }
    for i in 1..f.len().saturating_sub(1) {
        let (a, b, c) = (f[i - 1], f[i], f[i + 1]);
        let extremum = (b > a && b > c) || (b < a && b < c);
        if extremum && a.signum() == b.signum() && c.signum() == b.signum() {
            let spread = (b - a).abs().max((c - b).abs());
            if b.abs() <= spread {
                flagged = true;
            }
        }
    }
    (brackets, flagged)
}

/// Grid whose column `i` counts crossings of the sampled values `columns[i]`.
fn count_columns(t_axis: Vec<f64>, x_axis: Vec<f64>, columns: &[Vec<f64>]) -> FocalGrid {
    let cells = columns
        .par_iter()
        .flat_map_iter(|col| {
            x_axis
                .iter()
                .map(|&x| {
                    let (brackets, flagged) = scan_count(col, x, SHOOTING_TOL);
                    IndexValue {
                        index: FocalIndex::Finite(brackets.len() as u32),
                        confidence: if flagged { Confidence::NearBoundary } else { Confidence::Certain },
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    FocalGrid { t_axis, x_axis, cells }
}

/// Shooting samples strictly inside the band: `ν_i = a + (b - a)(i + ½)/N`.
fn band_samples(v_band: (f64, f64), samples: usize) -> Vec<f64> {
    let (a, b) = v_band;
    (0..samples).map(|i| a + (b - a) * (i as f64 + 0.5) / samples as f64).collect()
}

fn check_band_request(p: &PotentialSpec, v_band: (f64, f64), samples: usize) -> Result<()> {
    let vm = p.v_max_physical();
    if !(v_band.0 < v_band.1) || v_band.0 <= -vm || v_band.1 >= vm {
        return Err(Error::Domain(format!(
            "v_band ({}, {}) must be a nonempty subinterval of (-{vm}, {vm})",
            v_band.0, v_band.1
        )));
    }
    if samples < 2 {
        return Err(Error::Domain("need at least 2 shooting samples".into()));
    }
    Ok(())
}

/// Number of launch velocities `ν ∈ v_band` with `q(ν; t) = x`, in
/// physical units, by sign-change scan plus bisection refinement.
pub fn numeric_index(
    p: &PotentialSpec,
    t: f64,
    x: f64,
    v_band: (f64, f64),
    samples: usize,
) -> Result<IndexValue> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    check_band_request(p, v_band, samples)?;
    let nus = band_samples(v_band, samples);
    let values = nus
        .iter()
        .map(|&nu| physical_position(p, nu, t))
        .collect::<Result<Vec<_>>>()?;
    let (brackets, mut flagged) = scan_count(&values, x, SHOOTING_TOL);
    let mut roots: Vec<f64> = Vec::with_capacity(brackets.len());
    for &j in &brackets {
        // next nonzero sample after j closes the bracket
        let k = (j + 1..values.len()).find(|&k| values[k] != x).unwrap_or(j + 1);
        let root = bisect(
            |nu| physical_position(p, nu, t).map(|q| q - x).unwrap_or(f64::NAN),
            nus[j],
            nus[k],
            50,
        );
        if roots.last().is_some_and(|&r| (root - r).abs() < 1e-9) {
            flagged = true;
            continue;
        }
        roots.push(root);
    }
    Ok(IndexValue {
        index: FocalIndex::Finite(roots.len() as u32),
        confidence: if flagged { Confidence::NearBoundary } else { Confidence::Certain },
    })
}

/// Shooting grid over `t_axis × x_axis` in physical units.
///
/// Each launch velocity is integrated once with dense output up to
/// `max(t_axis)`, and every column is counted by sign-change scan over the
/// velocity samples.
pub fn numeric_grid(
    p: &PotentialSpec,
    t_axis: Vec<f64>,
    x_axis: Vec<f64>,
    v_band: (f64, f64),
    samples: usize,
) -> Result<FocalGrid> {
    check_band_request(p, v_band, samples)?;
    if t_axis.iter().any(|&t| !(t > 0.0)) {
        return Err(Error::Domain("shooting grid times must be positive".into()));
    }
    let t_max = t_axis.iter().copied().fold(0.0, f64::max);
    let nus = band_samples(v_band, samples);
    // positions[i][k] = q(ν_i; t_k)
    let positions = nus
        .par_iter()
        .map(|&nu| -> Result<Vec<f64>> {
            let (_, s_max, v) = p.to_normalized(p.q_star, t_max, nu);
            let sol = solve_dense(p, v, s_max, 1e-11)?;
            Ok(t_axis
                .iter()
                .map(|&tau| p.mu * sol.eval(p.omega * tau)[0] + p.q_star)
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let columns: Vec<Vec<f64>> = (0..t_axis.len())
        .map(|k| positions.iter().map(|row| row[k]).collect())
        .collect();
    Ok(count_columns(t_axis, x_axis, &columns))
}

/// Number of `v` on the inclusive grid over `[-1, 1]` with `x_n(v; t) = x`.
pub fn renormalized_index(p: &PotentialSpec, n: u64, t: f64, x: f64, resolution: usize) -> Result<IndexValue> {
    if resolution < 2 {
        return Err(Error::Domain("resolution must be at least 2".into()));
    }
    let vs = uniform_grid(-1.0, 1.0, resolution);
    let values = vs
        .par_iter()
        .map(|&v| renormalized_trajectory(p, n, v, t))
        .collect::<Result<Vec<_>>>()?;
    let (brackets, mut flagged) = scan_count(&values, x, SHOOTING_TOL);
    let mut roots: Vec<f64> = Vec::new();
    for &j in &brackets {
        let k = (j + 1..values.len()).find(|&k| values[k] != x).unwrap_or(j + 1);
        let root = bisect(
            |v| renormalized_trajectory(p, n, v, t).map(|y| y - x).unwrap_or(f64::NAN),
            vs[j],
            vs[k],
            50,
        );
        if roots.last().is_some_and(|&r| (root - r).abs() < 1e-9) {
            flagged = true;
            continue;
        }
        roots.push(root);
    }
    Ok(IndexValue {
        index: FocalIndex::Finite(roots.len() as u32),
        confidence: if flagged { Confidence::NearBoundary } else { Confidence::Certain },
    })
}

/// Renormalized grid over `t_axis × x_axis` using one evaluation of `x_n`
/// per `(v, t)` sample.
pub fn renormalized_grid(
    p: &PotentialSpec,
    n: u64,
    t_axis: Vec<f64>,
    x_axis: Vec<f64>,
    resolution: usize,
) -> Result<FocalGrid> {
    if resolution < 2 {
        return Err(Error::Domain("resolution must be at least 2".into()));
    }
    let vs = uniform_grid(-1.0, 1.0, resolution);
    let columns = t_axis
        .par_iter()
        .map(|&t| vs.iter().map(|&v| renormalized_trajectory(p, n, v, t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(count_columns(t_axis, x_axis, &columns))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(ell: Ell, t: f64, x: f64) -> u32 {
        asymptotic_index(ell, t, x).index.finite().unwrap()
    }

    #[test]
    fn segment_indices() {
        for ell in Ell::BOTH {
            assert_eq!(idx(ell, PI / 2.0, 0.0), 1);
            assert_eq!(idx(ell, 1.5 * PI, 0.0), 3);
            assert_eq!(idx(ell, 2.5 * PI, 0.0), 5);
            assert_eq!(idx(ell, PI / 2.0, 0.05), 2);
            assert_eq!(idx(ell, PI / 2.0, -0.05), 2);
            for t in [0.1, 2.0, 5.0] {
                assert_eq!(idx(ell, t, 1.0), 0);
                assert_eq!(idx(ell, t, -1.0), 0);
            }
        }
    }

    #[test]
    fn base_point_and_initial_line() {
        assert_eq!(asymptotic_index(Ell::Plus, 0.0, 0.0).index, FocalIndex::Infinite);
        assert_eq!(idx(Ell::Plus, 0.0, 0.3), 0);
    }

    #[test]
    fn cusp_is_flagged() {
        for k in 1..=3 {
            let v = asymptotic_index(Ell::Minus, k as f64 * PI, 0.0);
            assert_eq!(v.index, FocalIndex::Finite(2 * k - 1));
            assert_eq!(v.confidence, Confidence::NearBoundary);
        }
    }

    #[test]
    fn scan_count_basics() {
        let (b, f) = scan_count(&[-1.0, 1.0, -1.0], 0.0, 1e-7);
        assert_eq!(b.len(), 2);
        assert!(!f);
        // tangency at a sample: not counted, flagged
        let (b, f) = scan_count(&[1.0, 0.0, 1.0], 0.0, 1e-7);
        assert_eq!(b.len(), 0);
        assert!(f);
        // transversal zero at a sample: counted once
        let (b, _) = scan_count(&[-1.0, 0.0, 1.0], 0.0, 1e-7);
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn grey_levels() {
        assert_eq!(FocalIndex::Infinite.grey_level(), 255);
        assert_eq!(FocalIndex::Finite(0).grey_level(), 0);
        assert_eq!(FocalIndex::Finite(3).grey_level(), 60);
        assert_eq!(FocalIndex::Infinite.to_string(), "inf");
    }

    #[test]
    fn grid_rejects_tiny_resolution() {
        assert!(asymptotic_grid(Ell::Plus, (0.0, 1.0), (-1.0, 1.0), 1, 5).is_err());
    }
}
