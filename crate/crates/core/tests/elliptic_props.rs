use focal_renorm::dynamics::g_factor;
use focal_renorm::elliptic::{complete_k, jacobi, jacobi_sd};
use focal_renorm::potentials::Ell;
use proptest::prelude::*;

proptest! {
    #[test]
    fn pythagorean_identities(u in -20.0f64..20.0, m in 0.0f64..0.99) {
        let j = jacobi(u, m).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-12);
        prop_assert!((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_period(m in 0.0f64..0.99) {
        let k = complete_k(m).unwrap();
        prop_assert!((jacobi(k, m).unwrap().sn - 1.0).abs() < 1e-10);
    }

    #[test]
    fn parity(u in -50.0f64..50.0, m in 0.0f64..0.99) {
        let a = jacobi(u, m).unwrap();
        let b = jacobi(-u, m).unwrap();
        prop_assert!((a.sn + b.sn).abs() < 1e-13);
        prop_assert!((a.cn - b.cn).abs() < 1e-13);
        prop_assert!((a.dn - b.dn).abs() < 1e-13);
    }

    #[test]
    fn matches_trigonometric_limit(u in -30.0f64..30.0) {
        let j = jacobi(u, 0.0).unwrap();
        prop_assert!((j.sn - u.sin()).abs() < 1e-13);
        prop_assert!((j.cn - u.cos()).abs() < 1e-13);
        prop_assert_eq!(j.dn, 1.0);
    }

    /// Against the derivative `d sn/du = cn dn`, by central differences.
    #[test]
    fn derivative_of_sn(u in -10.0f64..10.0, m in 0.0f64..0.9) {
        let h = 1e-5;
        let d = (jacobi(u + h, m).unwrap().sn - jacobi(u - h, m).unwrap().sn) / (2.0 * h);
        let j = jacobi(u, m).unwrap();
        prop_assert!((d - j.cn * j.dn).abs() < 1e-8);
    }
}

/// Largest `|f(t, m) - series(t, m)| / m²` over `t ∈ [0, 10]`.
fn worst_ratio(m: f64, err: impl Fn(f64, f64) -> f64) -> f64 {
    (0..=2000)
        .map(|i| 10.0 * i as f64 / 2000.0)
        .map(|t| err(t, m).abs() / (m * m))
        .fold(0.0, f64::max)
}

fn assert_one_constant(name: &str, err: impl Fn(f64, f64) -> f64) {
    let coarse = worst_ratio(1e-2, &err);
    let fine = worst_ratio(1e-3, &err);
    // Second order in m: both parameters share one constant.
    assert!(coarse.is_finite() && coarse < 50.0, "{name}: C = {coarse}");
    assert!(fine <= 1.2 * coarse, "{name}: {fine} vs {coarse}");
    assert!(fine >= 0.5 * coarse, "{name}: {fine} vs {coarse}");
}

#[test]
fn small_parameter_series_sn() {
    assert_one_constant("sn", |t, m| {
        let (s, c) = t.sin_cos();
        jacobi(t, m).unwrap().sn - (s - 0.25 * m * (t - s * c) * c)
    });
}

#[test]
fn small_parameter_series_dn() {
    assert_one_constant("dn", |t, m| jacobi(t, m).unwrap().dn - (1.0 - 0.5 * m * t.sin().powi(2)));
}

#[test]
fn small_parameter_series_sd() {
    assert_one_constant("sd", |t, m| {
        jacobi_sd(t, m).unwrap() - (t.sin() - 0.25 * m * (g_factor(Ell::Plus, t) - 4.0 * t.sin()))
    });
}
