use std::f64::consts::PI;

use focal_renorm::dynamics::position;
use focal_renorm::period::period;
use focal_renorm::potentials::{Ell, PotentialSpec};
use focal_renorm::renorm::{
    asymptotic_trajectory, phase_remainder, renormalized_trajectory, renormalized_unsigned, scaling_parameter,
    scaling_velocity, uniform_grid,
};
use proptest::prelude::*;

fn potential(i: usize) -> PotentialSpec {
    match i {
        0 => PotentialSpec::quartic(Ell::Plus),
        1 => PotentialSpec::quartic(Ell::Minus),
        2 => PotentialSpec::pendulum(),
        _ => PotentialSpec::perturbed(Ell::Minus, 0.1).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sign_follows_parity(which in 0usize..4, n in 50u64..5000, v in -1.0f64..1.0, t in 0.0f64..5.0) {
        let p = potential(which);
        let signed = renormalized_trajectory(&p, n, v, t).unwrap();
        let plain = renormalized_unsigned(&p, n, v, t).unwrap();
        let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(signed, parity * plain);
    }

    #[test]
    fn bounded_in_window(which in 0usize..4, n in 100u64..100_000, v in -1.0f64..1.0, frac in 0.0f64..1.0) {
        let p = potential(which);
        let t = frac * (0.1 * n as f64).min(20.0);
        prop_assert!(renormalized_trajectory(&p, n, v, t).unwrap().abs() <= 1.2);
    }

    #[test]
    fn limit_is_odd_and_bounded(ell in prop_oneof![Just(Ell::Plus), Just(Ell::Minus)], v in -1.0f64..1.0, t in 0.0f64..50.0) {
        let x = asymptotic_trajectory(ell, v, t);
        prop_assert!(x.abs() <= v.abs());
        prop_assert_eq!(asymptotic_trajectory(ell, -v, t), -x);
    }
}

/// `|γ² - Γ²| / (t/n)^{3/2}` for the quartic of sign `ell`.
fn proximity(ell: Ell, n: u64, t: f64) -> f64 {
    let p = PotentialSpec::quartic(ell);
    let g = scaling_velocity(&p, n, t).unwrap();
    let gp = scaling_parameter(n, t);
    (g * g - gp * gp).abs() / (t / n as f64).powf(1.5)
}

#[test]
fn scaling_velocity_close_to_parameter() {
    for ell in Ell::BOTH {
        for t in [0.5, 1.0, 2.0] {
            let r: Vec<f64> = [100, 1000, 10_000, 100_000].iter().map(|&n| proximity(ell, n, t)).collect();
            assert!(r.iter().all(|&x| x <= 1.0), "ell {ell} t {t}: {r:?}");
            assert!(r.windows(2).all(|w| w[1] <= w[0]), "ell {ell} t {t}: {r:?}");
        }
    }
}

#[test]
fn scaling_velocity_solves_period_equation() {
    for p in [PotentialSpec::quartic(Ell::Plus), PotentialSpec::pendulum()] {
        let (n, t) = (1000, 1.5);
        let g = scaling_velocity(&p, n, t).unwrap();
        let target = 2.0 * PI - 2.0 * p.ell.sign() * t / n as f64;
        assert!((period(&p, g).unwrap() - target).abs() < 1e-12);
    }
}

/// Largest phase residual `|nπ - ℓt - (n/2)T(Γv) - R| / (t^{3/2}/n^{1/2})` over a grid.
fn phase_residual(p: &PotentialSpec, n: u64) -> f64 {
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 1.0, 2.0] {
        let gamma = scaling_parameter(n, t);
        for v in uniform_grid(-1.0, 1.0, 11) {
            let lhs = n as f64 * PI - p.ell.sign() * t;
            let rhs = 0.5 * n as f64 * period(p, gamma * v).unwrap() + phase_remainder(p.ell, v, t);
            worst = worst.max((lhs - rhs).abs() / (t.powf(1.5) / (n as f64).sqrt()));
        }
    }
    worst
}

#[test]
fn half_periods_track_the_phase() {
    for p in [PotentialSpec::quartic(Ell::Plus), PotentialSpec::quartic(Ell::Minus), PotentialSpec::pendulum()] {
        let r: Vec<f64> = [100, 1000, 10_000].iter().map(|&n| phase_residual(&p, n)).collect();
        assert!(r.iter().all(|&x| x < 1.0), "{}: {r:?}", p.kind);
    }
}

#[test]
fn short_time_form() {
    for p in [PotentialSpec::perturbed(Ell::Plus, 0.1).unwrap(), PotentialSpec::perturbed(Ell::Minus, 0.1).unwrap()] {
        let worst = |n: u64| {
            let t_max = 0.1 * (n as f64).powf(0.6);
            let mut w = 0.0f64;
            for t in uniform_grid(0.0, t_max, 41).into_iter().skip(1) {
                let gamma = scaling_parameter(n, t);
                for v in uniform_grid(-1.0, 1.0, 9) {
                    let x = position(&p, gamma * v, t, 1e-12).unwrap();
                    w = w.max((x - gamma * v * t.sin()).abs() / (gamma.powi(3) * t));
                }
            }
            w
        };
        let r: Vec<f64> = [100, 1000, 10_000].iter().map(|&n| worst(n)).collect();
        let c = r[0].max(0.5);
        assert!(r.iter().all(|&x| x <= 2.0 * c), "{}: {r:?}", p.kind);
    }
}

#[test]
fn potentials_share_one_limit() {
    let ps = [
        PotentialSpec::quartic(Ell::Minus),
        PotentialSpec::pendulum(),
        PotentialSpec::perturbed(Ell::Minus, 0.1).unwrap(),
    ];
    let spread = |n: u64| {
        let mut worst = 0.0f64;
        for v in uniform_grid(-1.0, 1.0, 9) {
            for t in uniform_grid(0.0, 0.2, 5) {
                let xs: Vec<f64> = ps.iter().map(|p| renormalized_trajectory(p, n, v, t).unwrap()).collect();
                let hi = xs.iter().copied().fold(f64::MIN, f64::max);
                let lo = xs.iter().copied().fold(f64::MAX, f64::min);
                worst = worst.max(hi - lo);
            }
        }
        worst
    };
    let s: Vec<f64> = [100, 1000, 10_000].iter().map(|&n| spread(n)).collect();
    assert!(s[1] < s[0] && s[2] < s[1], "{s:?}");
}
