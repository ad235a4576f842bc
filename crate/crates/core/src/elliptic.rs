//! Jacobi elliptic functions and the complete elliptic integral of the first kind.
//!
//! Everything here takes the *parameter* `m = k²`, not the modulus `k`.
//! Evaluation uses the descending Landen transformation (arithmetic-geometric
//! mean), which is uniformly accurate for `m ∈ [0, 1)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_ITER: usize = 32;
const AGM_TOL: f64 = 1e-15;

/// Largest accepted argument magnitude. Callers reduce the phase first.
pub const MAX_ARGUMENT: f64 = 1e8;

/// The triple `(sn, cn, dn)` at a given argument and parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

impl EllipticTriple {
    /// `sd = sn / dn`.
    pub fn sd(&self) -> f64 {
        self.sn / self.dn
    }
}

fn check_parameter(m: f64) -> Result<()> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "elliptic parameter m = {m} must lie in [0, 1)"
        )));
    }
    Ok(())
}

/// AGM ladder for `(1, √(1-m))`. Returns the `a_n` and `c_n` sequences.
fn agm_ladder(m: f64) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![1.0];
    let mut c = vec![m.sqrt()];
    let mut b = (1.0 - m).sqrt();
    for _ in 0..MAX_ITER {
        let last = *a.last().unwrap();
        if c.last().unwrap().abs() < AGM_TOL {
            break;
        }
        a.push(0.5 * (last + b));
        c.push(0.5 * (last - b));
        b = (last * b).sqrt();
    }
    (a, c)
}

/// Complete elliptic integral of the first kind,
/// `K(m) = ∫₀^{π/2} (1 - m sin²θ)^{-1/2} dθ = π / (2 AGM(1, √(1-m)))`.
pub fn complete_k(m: f64) -> Result<f64> {
    check_parameter(m)?;
    let (a, _) = agm_ladder(m);
    Ok(FRAC_PI_2 / a.last().unwrap())
}

/// Jacobi elliptic functions `sn`, `cn`, `dn` at argument `u` and parameter `m`.
///
/// The argument is first reduced modulo the real period `4K(m)`.
pub fn jacobi(u: f64, m: f64) -> Result<EllipticTriple> {
    check_parameter(m)?;
    if !u.is_finite() {
        return Err(Error::Domain(format!("argument u = {u} is not finite")));
    }
    if u.abs() > MAX_ARGUMENT {
        return Err(Error::Domain(format!(
            "argument |u| = {} exceeds {MAX_ARGUMENT:e}; reduce the phase first",
            u.abs()
        )));
    }

    let (a, c) = agm_ladder(m);
    let n = a.len() - 1;
    let quarter = FRAC_PI_2 / a[n];
    let period = 4.0 * quarter;
    let u = u - period * (u / period).round();

    // phi_N = 2^N a_N u, then walk the ladder back down.
    let mut phi = (1u64 << n) as f64 * a[n] * u;
    for k in (1..=n).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - m * sn * sn).sqrt();
    Ok(EllipticTriple { sn, cn, dn })
}

/// `sd(u; m) = sn(u; m) / dn(u; m)`, bounded by `1/√(1-m)`.
pub fn jacobi_sd(u: f64, m: f64) -> Result<f64> {
    jacobi(u, m).map(|e| e.sd())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identity_at_zero() {
        let e = jacobi(0.0, 0.3).unwrap();
        assert_eq!(e.sn, 0.0);
        assert!((e.cn - 1.0).abs() < 1e-15);
        assert!((e.dn - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circular_limit() {
        let e = jacobi(1.2, 0.0).unwrap();
        assert!((e.sn - 1.2f64.sin()).abs() < 1e-15);
        assert!((e.cn - 1.2f64.cos()).abs() < 1e-15);
        assert_eq!(e.dn, 1.0);
        for u in [0.1, 1.0, 3.0] {
            assert!((jacobi_sd(u, 0.0).unwrap() - u.sin()).abs() < 1e-15);
        }
        assert_eq!(jacobi_sd(0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        assert!(jacobi(0.1, -0.1).is_err());
        assert!(jacobi(0.1, 1.0).is_err());
        assert!(jacobi(f64::NAN, 0.2).is_err());
        assert!(jacobi(f64::INFINITY, 0.2).is_err());
        assert!(jacobi(2e8, 0.2).is_err());
        assert!(complete_k(1.0).is_err());
        assert!(complete_k(-1e-3).is_err());
    }

    #[test]
    fn k_at_zero_and_monotone() {
        assert_eq!(complete_k(0.0).unwrap(), PI / 2.0);
        let mut prev = 0.0;
        for i in 0..100 {
            let k = complete_k(i as f64 / 100.0).unwrap();
            assert!(k > prev);
            prev = k;
        }
    }

    #[test]
    fn quarter_period() {
        for i in 0..10 {
            let m = i as f64 / 10.0;
            let k = complete_k(m).unwrap();
            assert!((jacobi(k, m).unwrap().sn - 1.0).abs() < 1e-10, "m = {m}");
        }
    }

    #[test]
    fn periodicity() {
        let m = 0.7;
        let k = complete_k(m).unwrap();
        for u in [0.3, 1.1, -2.5] {
            let e0 = jacobi(u, m).unwrap();
            let e4 = jacobi(u + 4.0 * k, m).unwrap();
            let e2 = jacobi(u + 2.0 * k, m).unwrap();
            assert!((e0.sn - e4.sn).abs() < 1e-13);
            assert!((e0.cn - e4.cn).abs() < 1e-13);
            assert!((e0.dn - e2.dn).abs() < 1e-13);
            assert!((e0.sn + e2.sn).abs() < 1e-13);
        }
    }

    #[test]
    fn sd_bound() {
        for i in 0..10 {
            let m = i as f64 / 10.0;
            let bound = 1.0 / (1.0 - m).sqrt();
            for j in 0..200 {
                let u = -10.0 + j as f64 * 0.1;
                assert!(jacobi_sd(u, m).unwrap().abs() <= bound * (1.0 + 1e-14));
            }
        }
    }
}
