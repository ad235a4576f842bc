//! The period map `T(v)` of orbits launched from the equilibrium.
//!
//! `T(v) = √2 ∫_{x^m}^{x^M} (½v² - V(x))^{-1/2} dx`, with `T(0) = 2π` by
//! continuity. Each half `[0, x^M]`, `[x^m, 0]` is mapped by
//! `x = x_e sin φ`; writing `½v² - V(x) = (x_e - x)·DV(x_e, x)` with the
//! divided difference `DV` removes the inverse square-root endpoint
//! singularity exactly, and the remaining smooth integrand goes to
//! Gauss–Legendre quadrature.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use crate::quadrature::GaussLegendre;
use crate::roots::brent;

/// Turning points `x^m ≤ 0 ≤ x^M` of the orbit with energy `½v²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub x_min: f64,
    pub x_max: f64,
}

const BASE_ORDER: usize = 64;
const MAX_ORDER: usize = 1024;

/// Default quadrature agreement threshold.
pub const DEFAULT_PERIOD_TOL: f64 = 1e-12;

fn rules() -> &'static [GaussLegendre] {
    static RULES: OnceLock<Vec<GaussLegendre>> = OnceLock::new();
    RULES.get_or_init(|| {
        let mut out = Vec::new();
        let mut n = BASE_ORDER;
        while n <= MAX_ORDER {
            out.push(GaussLegendre::new(n));
            n *= 2;
        }
        out
    })
}

fn turning_point(p: &PotentialSpec, energy: f64, dir: f64) -> Result<f64> {
    let f = |x: f64| p.value(x) - energy;
    let hi = match p.barrier(dir) {
        Some(b) if f(b) > 0.0 => b,
        Some(b) => {
            return Err(Error::PeriodicBand { v: (2.0 * energy).sqrt(), v_max: (2.0 * p.value(b)).sqrt() })
        }
        None => {
            // V grows without bound on this side; expand until it exceeds the energy.
            let mut x = dir * (2.0 * energy).sqrt().max(1e-3);
            let mut tries = 0;
            while f(x) <= 0.0 {
                x *= 2.0;
                tries += 1;
                if tries > 200 {
                    return Err(Error::Root("could not bracket a turning point".into()));
                }
            }
            x
        }
    };
    brent(f, 0.0, hi, 1e-15)
}

/// Roots of `V(x) = ½v²` adjacent to the origin.
pub fn turning_points(p: &PotentialSpec, v: f64) -> Result<TurningPoints> {
    if v == 0.0 {
        return Err(Error::Domain("turning points need v != 0".into()));
    }
    p.check_band(v)?;
    let energy = 0.5 * v * v;
    Ok(TurningPoints {
        x_min: turning_point(p, energy, -1.0)?,
        x_max: turning_point(p, energy, 1.0)?,
    })
}

/// `∫_0^{x_e} (E - V(x))^{-1/2} dx` after the `x = x_e sin φ` substitution.
fn half_integral(p: &PotentialSpec, x_e: f64, rule: &GaussLegendre) -> f64 {
    let scale = (2.0 * x_e.abs()).sqrt();
    rule.integrate(0.0, FRAC_PI_2, |phi| {
        let alpha = FRAC_PI_4 - 0.5 * phi;
        let dd = p.divided_difference(x_e, x_e * phi.sin()).abs();
        scale * alpha.cos() / dd.sqrt()
    })
}

fn quadrature_period(p: &PotentialSpec, tp: &TurningPoints, tol: f64) -> f64 {
    let mut prev = f64::NAN;
    let mut value = 0.0;
    for rule in rules() {
        value = 2f64.sqrt() * (half_integral(p, tp.x_max, rule) + half_integral(p, tp.x_min, rule));
        if (value - prev).abs() <= tol {
            break;
        }
        prev = value;
    }
    value
}

/// Minimal period of `x(v; ·)` in normalized time; `T(0) = 2π`.
pub fn period(p: &PotentialSpec, v: f64) -> Result<f64> {
    period_with_tol(p, v, DEFAULT_PERIOD_TOL)
}

/// [`period`] with an explicit quadrature agreement threshold.
pub fn period_with_tol(p: &PotentialSpec, v: f64, tol: f64) -> Result<f64> {
    if v == 0.0 {
        return Ok(2.0 * PI);
    }
    let tp = turning_points(p, v)?;
    Ok(quadrature_period(p, &tp, tol))
}

/// Period in physical time for a physical launch velocity `ν`.
pub fn period_physical(p: &PotentialSpec, nu: f64) -> Result<f64> {
    let (_, _, v) = p.to_normalized(p.q_star, 0.0, nu);
    Ok(period(p, v)? / p.omega)
}

/// Least-squares coefficient `c` of `T(v) - 2π ≈ c v²` over `v_grid`.
///
/// For a quartic normal form `c ≈ -3πℓ/4`.
pub fn period_expansion_check(p: &PotentialSpec, v_grid: &[f64]) -> Result<f64> {
    if v_grid.is_empty() {
        return Err(Error::Domain("empty velocity grid".into()));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for &v in v_grid {
        if v.abs() > 0.2 {
            return Err(Error::Domain(format!("grid velocity {v} exceeds 0.2")));
        }
        p.check_band(v)?;
        let v2 = v * v;
        num += (period(p, v)? - 2.0 * PI) * v2;
        den += v2 * v2;
    }
    if den == 0.0 {
        return Err(Error::Domain("velocity grid must contain a nonzero velocity".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::complete_k;
    use crate::potentials::Ell;

    #[test]
    fn quartic_turning_points_closed_form() {
        for ell in Ell::BOTH {
            let p = PotentialSpec::quartic(ell);
            let l = ell.sign();
            let v: f64 = 0.3;
            let closed = (-l + l * (1.0 + 2.0 * l * v * v).sqrt()).sqrt();
            let tp = turning_points(&p, v).unwrap();
            assert!((tp.x_max - closed).abs() < 1e-13);
            assert!((tp.x_min + tp.x_max).abs() < 1e-12);
            assert!((p.value(tp.x_max) - 0.5 * v * v).abs() < 1e-12);
        }
        let tp = turning_points(&PotentialSpec::quartic(Ell::Plus), 0.3).unwrap();
        assert!((tp.x_max - 0.293_731_253_223_114_6).abs() < 1e-13);
    }

    #[test]
    fn turning_points_need_nonzero_in_band() {
        let p = PotentialSpec::quartic(Ell::Minus);
        assert!(turning_points(&p, 0.0).is_err());
        assert!(matches!(turning_points(&p, 0.9), Err(Error::PeriodicBand { .. })));
    }

    #[test]
    fn zero_velocity_period() {
        for p in [PotentialSpec::quartic(Ell::Plus), PotentialSpec::pendulum()] {
            assert_eq!(period(&p, 0.0).unwrap(), 2.0 * PI);
        }
    }

    #[test]
    fn pendulum_physical_period() {
        let p = PotentialSpec::pendulum();
        for nu in [0.2f64, 0.5, 1.0] {
            let want = 4.0 * complete_k(nu * nu / 4.0).unwrap();
            assert!((period_physical(&p, nu).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn quartic_period_matches_elliptic() {
        for ell in Ell::BOTH {
            let p = PotentialSpec::quartic(ell);
            for v in [0.05, 0.2, 0.5] {
                let q = crate::dynamics::quartic_params(ell, v).unwrap();
                let got = period(&p, v).unwrap();
                assert!((got - q.period().unwrap()).abs() < 1e-11, "ell {ell} v {v}");
            }
        }
    }

    #[test]
    fn small_velocity_expansion() {
        for ell in Ell::BOTH {
            let p = PotentialSpec::quartic(ell);
            let v: f64 = 0.05;
            let want = 2.0 * PI - 0.75 * PI * ell.sign() * v * v;
            assert!((period(&p, v).unwrap() - want).abs() <= 5.0 * v.powi(3));
        }
    }

    #[test]
    fn evenness() {
        for p in [PotentialSpec::pendulum(), PotentialSpec::perturbed(Ell::Plus, 0.1).unwrap()] {
            for v in [0.05, 0.2, 0.4] {
                assert!((period(&p, v).unwrap() - period(&p, -v).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expansion_check_rejects_large_grid() {
        let p = PotentialSpec::quartic(Ell::Plus);
        assert!(period_expansion_check(&p, &[0.1, 0.3]).is_err());
        assert!(period_expansion_check(&p, &[]).is_err());
    }
}
