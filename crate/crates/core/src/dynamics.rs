//! Trajectories `x(v; t)` launched from the equilibrium with velocity `v`.
//!
//! For the pure quartics `V_ℓ` the solution is an elliptic function:
//! `x₁ = A₁ sd(λ₁t; m₁)` and `x₋₁ = A₋₁ sn(λ₋₁t; m₋₁)`. Any other potential is
//! integrated numerically.

use crate::elliptic::{complete_k, jacobi};
use crate::error::{Error, Result};
use crate::ode::{velocity_verlet, DenseSolution, Dopri5};
use crate::potentials::{Ell, PotentialSpec};

/// Longest integration span accepted; longer times must be phase-reduced.
pub const MAX_T_END: f64 = 1e4;

/// Default tolerance of the adaptive integrator.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Default step of the symplectic integrator.
pub const DEFAULT_VERLET_STEP: f64 = 1e-3;

/// Coefficients of the closed-form solution for `V_ℓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticSolutionParams {
    pub ell: Ell,
    pub a: f64,
    pub b: f64,
    /// Amplitude (signed with `v`).
    pub amplitude: f64,
    /// Frequency `λ`.
    pub lambda: f64,
    /// Elliptic parameter.
    pub m: f64,
}

impl QuarticSolutionParams {
    /// Minimal period `4K(m)/λ`.
    pub fn period(&self) -> Result<f64> {
        Ok(4.0 * complete_k(self.m)? / self.lambda)
    }
}

/// Closed-form coefficients for initial velocity `v`.
pub fn quartic_params(ell: Ell, v: f64) -> Result<QuarticSolutionParams> {
    let l = ell.sign();
    let disc = 1.0 + 2.0 * l * v * v;
    if !v.is_finite() || disc <= 0.0 {
        return Err(Error::PeriodicBand { v: v.abs(), v_max: 0.5f64.sqrt() });
    }
    let s = disc.sqrt();
    let a2 = 1.0 + s;
    // b² = ℓ(s - 1) = 2v²/(1 + s), written without cancellation.
    let b2 = 2.0 * v * v / (1.0 + s);
    let (a, b) = (a2.sqrt(), b2.sqrt());
    let sign = if v < 0.0 { -1.0 } else { 1.0 };
    let (amplitude, lambda, m) = match ell {
        Ell::Plus => (sign * a * b / (a2 + b2).sqrt(), ((a2 + b2) / 2.0).sqrt(), b2 / (a2 + b2)),
        Ell::Minus => (sign * b, a / 2f64.sqrt(), b2 / a2),
    };
    if m >= 1.0 {
        return Err(Error::PeriodicBand { v: v.abs(), v_max: 0.5f64.sqrt() });
    }
    Ok(QuarticSolutionParams { ell, a, b, amplitude, lambda, m })
}

/// Exact solution of `ẍ = -x - ℓx³`, `x(0) = 0`, `ẋ(0) = v`.
pub fn exact_quartic_solution(ell: Ell, v: f64, t: f64) -> Result<f64> {
    let p = quartic_params(ell, v)?;
    exact_from_params(&p, t)
}

/// Evaluates the closed form for precomputed coefficients.
pub fn exact_from_params(p: &QuarticSolutionParams, t: f64) -> Result<f64> {
    if p.amplitude == 0.0 {
        return Ok(0.0);
    }
    let e = jacobi(p.lambda * t, p.m)?;
    Ok(match p.ell {
        Ell::Plus => p.amplitude * e.sd(),
        Ell::Minus => p.amplitude * e.sn,
    })
}

/// `e_ℓ(v) = 1 + j_ℓ v²` with `j₁ = ½`, `j₋₁ = -¼`.
pub fn e_factor(ell: Ell, v: f64) -> f64 {
    let j = match ell {
        Ell::Plus => 0.5,
        Ell::Minus => -0.25,
    };
    1.0 + j * v * v
}

/// `g_ℓ(t) = t cos t + ℓ(sin t cos²t + 2 sin t)`.
pub fn g_factor(ell: Ell, t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    t * c + ell.sign() * (s * c * c + 2.0 * s)
}

/// `v sin(e_ℓ(v) t) - ⅛ v³ g_ℓ(e_ℓ(v) t)`.
pub fn third_order_approx(ell: Ell, v: f64, t: f64) -> f64 {
    let phase = e_factor(ell, v) * t;
    v * phase.sin() - v.powi(3) * g_factor(ell, phase) / 8.0
}

/// Integrator choice for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Dormand–Prince 5(4) with dense output.
    Adaptive,
    /// Velocity Verlet with the given fixed step.
    Symplectic { step: f64 },
}

/// A sampled trajectory `(tᵢ, xᵢ, ẋᵢ, Eᵢ)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectorySample {
    pub t: Vec<f64>,
    pub x: Vec<f64>,
    pub xdot: Vec<f64>,
    pub energy: Vec<f64>,
}

impl TrajectorySample {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn push(&mut self, p: &PotentialSpec, t: f64, x: f64, xdot: f64) {
        self.t.push(t);
        self.x.push(x);
        self.xdot.push(xdot);
        self.energy.push(0.5 * xdot * xdot + p.value(x));
    }

    /// Largest `|Eᵢ - E₀|`.
    pub fn max_energy_error(&self) -> f64 {
        let e0 = self.energy.first().copied().unwrap_or(0.0);
        self.energy.iter().map(|e| (e - e0).abs()).fold(0.0, f64::max)
    }
}

fn check_span(t_end: f64) -> Result<()> {
    if !t_end.is_finite() || t_end < 0.0 {
        return Err(Error::Domain(format!("t_end = {t_end} must be finite and non-negative")));
    }
    if t_end > MAX_T_END {
        return Err(Error::Domain(format!(
            "t_end = {t_end} exceeds {MAX_T_END:e}; reduce time modulo the period first"
        )));
    }
    Ok(())
}

/// Dense adaptive solution of the normalized equation of motion.
pub fn solve_dense(p: &PotentialSpec, v: f64, t_end: f64, tol: f64) -> Result<DenseSolution> {
    check_span(t_end)?;
    Dopri5::new(tol).solve(|x| p.force(x), [0.0, v], t_end)
}

/// `x(v; t)` on the normalized potential: closed form for pure quartics,
/// adaptive integration at tolerance `tol` otherwise.
pub fn position(p: &PotentialSpec, v: f64, t: f64, tol: f64) -> Result<f64> {
    if v == 0.0 {
        return Ok(0.0);
    }
    if let crate::potentials::PotentialKind::Quartic(ell) = p.kind {
        return exact_quartic_solution(ell, v, t);
    }
    Ok(solve_dense(p, v, t, tol)?.final_state()[0])
}

/// Integrates `ẍ = -V'(x)`, `x(0) = 0`, `ẋ(0) = v` on `[0, t_end]`.
///
/// Samples are the accepted step points (adaptive) or every fixed step
/// (symplectic). Aborts when the energy error exceeds `10³·tol` (relative to
/// `max(E₀, 1)`); for the symplectic scheme the bound uses `max(tol, step²)`.
pub fn integrate(p: &PotentialSpec, v: f64, t_end: f64, mode: Mode, tol: f64) -> Result<TrajectorySample> {
    check_span(t_end)?;
    let mut out = TrajectorySample::default();
    match mode {
        Mode::Adaptive => {
            let sol = Dopri5::new(tol).solve(|x| p.force(x), [0.0, v], t_end)?;
            for (t, [x, xd]) in &sol.nodes {
                out.push(p, *t, *x, *xd);
            }
        }
        Mode::Symplectic { step } => {
            if !(step > 0.0) {
                return Err(Error::Domain(format!("symplectic step {step} must be positive")));
            }
            for (t, [x, xd]) in velocity_verlet(|x| p.force(x), [0.0, v], t_end, step) {
                out.push(p, t, x, xd);
            }
        }
    }
    let scale = match mode {
        Mode::Adaptive => tol,
        Mode::Symplectic { step } => tol.max(step * step),
    };
    let e0 = out.energy[0];
    let drift = out.max_energy_error();
    if drift > 1e3 * scale * e0.abs().max(1.0) {
        return Err(Error::Integration(format!(
            "energy drift {drift:e} exceeds 1e3 x {scale:e} (E0 = {e0})"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_at_rest() {
        let p = quartic_params(Ell::Plus, 0.0).unwrap();
        assert!((p.a - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(p.b, 0.0);
        assert_eq!(p.amplitude, 0.0);
        assert!((p.lambda - 1.0).abs() < 1e-15);
        assert_eq!(p.m, 0.0);
        let q = quartic_params(Ell::Minus, 0.0).unwrap();
        assert!((q.lambda - 1.0).abs() < 1e-15);
        assert_eq!(q.m, 0.0);
    }

    #[test]
    fn params_small_velocity() {
        let v: f64 = 0.1;
        let p = quartic_params(Ell::Minus, v).unwrap();
        // m₋₁ = ½v² + O(v⁴); the v⁴ coefficient is about 0.51
        assert!((p.m - 0.005).abs() <= v.powi(4));
        assert!((p.m - 0.005).abs() <= 1e-4);
        let v: f64 = 0.2;
        let p = quartic_params(Ell::Plus, v).unwrap();
        assert!((p.lambda - 1.02).abs() <= v.powi(4));
    }

    #[test]
    fn params_definitions() {
        for v in [0.05, -0.3, 0.6] {
            let p = quartic_params(Ell::Minus, v).unwrap();
            assert!((p.amplitude - v.signum() * p.b).abs() < 1e-15);
            assert!((p.lambda - p.a / 2f64.sqrt()).abs() < 1e-15);
            assert!((p.m - (p.b / p.a).powi(2)).abs() < 1e-15);
            let q = quartic_params(Ell::Plus, v).unwrap();
            let n2 = q.a * q.a + q.b * q.b;
            assert!((q.amplitude - v.signum() * q.a * q.b / n2.sqrt()).abs() < 1e-15);
            assert!((q.lambda - (n2 / 2.0).sqrt()).abs() < 1e-15);
            assert!((q.m - q.b * q.b / n2).abs() < 1e-15);
        }
    }

    #[test]
    fn params_out_of_band() {
        assert!(quartic_params(Ell::Minus, 0.5f64.sqrt()).is_err());
        assert!(quartic_params(Ell::Minus, 0.9).is_err());
        assert!(quartic_params(Ell::Plus, 5.0).is_ok());
    }

    #[test]
    fn closed_form_initial_conditions() {
        for ell in Ell::BOTH {
            assert_eq!(exact_quartic_solution(ell, 0.0, 3.7).unwrap(), 0.0);
            let v = 0.3;
            let h = 1e-6;
            let slope = (exact_quartic_solution(ell, v, h).unwrap()
                - exact_quartic_solution(ell, v, -h).unwrap())
                / (2.0 * h);
            assert!((slope - v).abs() < 1e-9);
            assert_eq!(exact_quartic_solution(ell, v, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn expansion_factors() {
        assert!((e_factor(Ell::Plus, 0.2) - 1.02).abs() < 1e-15);
        assert!((e_factor(Ell::Minus, 0.2) - 0.99).abs() < 1e-15);
        assert_eq!(g_factor(Ell::Plus, 0.0), 0.0);
        assert!((g_factor(Ell::Plus, std::f64::consts::FRAC_PI_2) - 2.0).abs() < 1e-15);
        for ell in Ell::BOTH {
            assert_eq!(third_order_approx(ell, 0.0, 4.0), 0.0);
        }
    }

    #[test]
    fn integrate_trivial_cases() {
        let p = PotentialSpec::pendulum();
        let rest = integrate(&p, 0.0, 10.0, Mode::Adaptive, 1e-10).unwrap();
        assert!(rest.x.iter().all(|&x| x == 0.0));
        let single = integrate(&p, 0.25, 0.0, Mode::Adaptive, 1e-10).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single.t[0], 0.0);
        assert_eq!(single.x[0], 0.0);
        assert_eq!(single.xdot[0], 0.25);
        assert!((single.energy[0] - 0.5 * 0.25 * 0.25).abs() < 1e-18);
        assert!(integrate(&p, 0.1, 2e4, Mode::Adaptive, 1e-10).is_err());
        assert!(integrate(&p, 0.1, -1.0, Mode::Adaptive, 1e-10).is_err());
    }

    #[test]
    fn symplectic_no_secular_drift() {
        let p = PotentialSpec::quartic(Ell::Plus);
        let traj = integrate(&p, 0.4, 200.0, Mode::Symplectic { step: 1e-2 }, 1e-10).unwrap();
        let n = traj.len();
        let early = traj.energy[..n / 10].iter().map(|e| (e - 0.08).abs()).fold(0.0, f64::max);
        let late = traj.energy[9 * n / 10..].iter().map(|e| (e - 0.08).abs()).fold(0.0, f64::max);
        assert!(late < 2.0 * early + 1e-12, "early {early:e}, late {late:e}");
    }
}
