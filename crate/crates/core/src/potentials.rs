//! One-dimensional potentials and the dimensionless change of coordinates.
//!
//! A physical potential `𝒱(q)` with mass `m` and an elliptic equilibrium `q*`
//! is rewritten as `V(x) = ½x² + (ℓ/4)x⁴ + f(x)` with `f(x) = O(|x|⁵)` by
//! `x = (q - q*)/μ`, `t = ωτ`, where
//!
//! ```text
//! ω = √(𝒱''(q*)/m),   μ = √(6 𝒱''(q*) / |𝒱⁽⁴⁾(q*)|),   ℓ = sign 𝒱⁽⁴⁾(q*).
//! ```
//!
//! All dynamics in this crate run on the normalized potential; physical
//! quantities are recovered with [`PotentialSpec::to_physical`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::roots::brent;

/// Sign of the quartic coefficient: `+1` hardening, `-1` softening.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ell {
    Plus,
    Minus,
}

impl Ell {
    pub fn sign(self) -> f64 {
        match self {
            Ell::Plus => 1.0,
            Ell::Minus => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Option<Self> {
        if s > 0.0 {
            Some(Ell::Plus)
        } else if s < 0.0 {
            Some(Ell::Minus)
        } else {
            None
        }
    }

    pub const BOTH: [Ell; 2] = [Ell::Plus, Ell::Minus];
}

impl fmt::Display for Ell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ell::Plus => "+1",
            Ell::Minus => "-1",
        })
    }
}

impl FromStr for Ell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Ell::Plus),
            "-1" | "-" => Ok(Ell::Minus),
            other => Err(Error::Parse(format!("ell must be +1 or -1, got {other:?}"))),
        }
    }
}

/// Default quintic coefficient of the perturbed-quartic test family.
pub const DEFAULT_C5: f64 = 0.1;

/// What kind of potential a [`PotentialSpec`] was built from.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    /// `V_ℓ(x) = ½x² + (ℓ/4)x⁴`, already dimensionless.
    Quartic(Ell),
    /// `V_ℓ(x) + c₅x⁵ + c₆x⁶ + c₇x⁷ + c₈x⁸`, already dimensionless.
    PerturbedQuartic { ell: Ell, coeffs: [f64; 4] },
    /// `𝒱(q) = 1 - cos q` with unit mass.
    Pendulum,
    /// `𝒱(q) = Σ a_k q^k` with unit mass.
    Polynomial(Vec<f64>),
}

impl PotentialKind {
    pub fn perturbed(ell: Ell, c5: f64) -> Self {
        PotentialKind::PerturbedQuartic { ell, coeffs: [c5, 0.0, 0.0, 0.0] }
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialKind::Quartic(ell) => write!(f, "quartic:{ell}"),
            PotentialKind::PerturbedQuartic { ell, coeffs } => {
                write!(f, "perturbed:{ell}")?;
                for (i, c) in coeffs.iter().enumerate() {
                    if *c != 0.0 {
                        write!(f, ":c{}={c}", i + 5)?;
                    }
                }
                Ok(())
            }
            PotentialKind::Pendulum => f.write_str("pendulum"),
            PotentialKind::Polynomial(a) => {
                let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("not a number: {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("not a finite number: {s:?}")));
    }
    Ok(v)
}

impl FromStr for PotentialKind {
    type Err = Error;

    /// Parses `quartic:+1`, `quartic:-1`, `pendulum`, `perturbed:+1:c5=0.1`
    /// (any of `c5..c8`, default `c5=0.1` when none is given) and
    /// `poly:a0,a1,a2,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        match head {
            "pendulum" if parts.next().is_none() => Ok(PotentialKind::Pendulum),
            "quartic" => {
                let ell = parts
                    .next()
                    .ok_or_else(|| Error::Parse("quartic needs a sign, e.g. quartic:+1".into()))?
                    .parse()?;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!("trailing fields in {s:?}")));
                }
                Ok(PotentialKind::Quartic(ell))
            }
            "perturbed" => {
                let ell = parts
                    .next()
                    .ok_or_else(|| Error::Parse("perturbed needs a sign, e.g. perturbed:+1".into()))?
                    .parse()?;
                let mut coeffs = [0.0; 4];
                let mut any = false;
                for field in parts {
                    let (name, value) = field
                        .split_once('=')
                        .ok_or_else(|| Error::Parse(format!("expected cK=value, got {field:?}")))?;
                    let idx = match name.trim() {
                        "c5" => 0,
                        "c6" => 1,
                        "c7" => 2,
                        "c8" => 3,
                        other => {
                            return Err(Error::Parse(format!(
                                "unknown perturbation coefficient {other:?} (use c5..c8)"
                            )))
                        }
                    };
                    coeffs[idx] = parse_real(value)?;
                    any = true;
                }
                if !any {
                    coeffs[0] = DEFAULT_C5;
                }
                Ok(PotentialKind::PerturbedQuartic { ell, coeffs })
            }
            "poly" => {
                let body = parts
                    .next()
                    .ok_or_else(|| Error::Parse("poly needs coefficients, e.g. poly:0,0,0.5".into()))?;
                if parts.next().is_some() {
                    return Err(Error::Parse(format!("trailing fields in {s:?}")));
                }
                let coeffs = body.split(',').map(parse_real).collect::<Result<Vec<_>>>()?;
                Ok(PotentialKind::Polynomial(coeffs))
            }
            _ => Err(Error::Parse(format!(
                "unknown potential {s:?}; expected quartic:±1, perturbed:±1[:cK=..], pendulum or poly:a0,a1,..."
            ))),
        }
    }
}

/// The normalized potential in a form that supports exact derivatives.
#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// `Σ c_k x^k`.
    Poly(Vec<f64>),
    /// `(1 - cos(s x)) / s²`.
    Cosine { s: f64 },
}

/// A potential together with its equilibrium data and periodic band.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub kind: PotentialKind,
    /// Equilibrium position (physical units).
    pub q_star: f64,
    pub mass: f64,
    /// Natural frequency `ω`; `1/ω` is the time scale.
    pub omega: f64,
    /// Natural length scale `μ`.
    pub mu: f64,
    pub ell: Ell,
    /// Largest dimensionless speed with periodic orbits; may be `+∞`.
    pub v_max: f64,
    shape: Shape,
}

impl PotentialSpec {
    /// Builds a potential and all of its derived equilibrium data.
    pub fn new(kind: PotentialKind) -> Result<Self> {
        let (q_star, mass, omega, mu, ell, shape) = match &kind {
            PotentialKind::Quartic(ell) => {
                (0.0, 1.0, 1.0, 1.0, *ell, Shape::Poly(vec![0.0, 0.0, 0.5, 0.0, ell.sign() / 4.0]))
            }
            PotentialKind::PerturbedQuartic { ell, coeffs } => {
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Potential("perturbation coefficients must be finite".into()));
                }
                let mut c = vec![0.0, 0.0, 0.5, 0.0, ell.sign() / 4.0];
                c.extend_from_slice(coeffs);
                trim_trailing_zeros(&mut c);
                (0.0, 1.0, 1.0, 1.0, *ell, Shape::Poly(c))
            }
            PotentialKind::Pendulum => {
                let mu = 6f64.sqrt();
                (0.0, 1.0, 1.0, mu, Ell::Minus, Shape::Cosine { s: mu })
            }
            PotentialKind::Polynomial(a) => normalize_polynomial(a)?,
        };
        let mut spec = PotentialSpec { kind, q_star, mass, omega, mu, ell, v_max: 0.0, shape };
        spec.v_max = spec.compute_band()?;
        Ok(spec)
    }

    /// Convenience constructor from a descriptor string.
    pub fn parse(descriptor: &str) -> Result<Self> {
        Self::new(descriptor.parse()?)
    }

    pub fn quartic(ell: Ell) -> Self {
        Self::new(PotentialKind::Quartic(ell)).expect("quartic potentials are always valid")
    }

    pub fn pendulum() -> Self {
        Self::new(PotentialKind::Pendulum).expect("the pendulum is always valid")
    }

    pub fn perturbed(ell: Ell, c5: f64) -> Result<Self> {
        Self::new(PotentialKind::perturbed(ell, c5))
    }

    /// Whether `V(x) = V(-x)` identically.
    pub fn is_even(&self) -> bool {
        match &self.shape {
            Shape::Cosine { .. } => true,
            Shape::Poly(c) => c.iter().skip(1).step_by(2).all(|&a| a == 0.0),
        }
    }

    /// Whether the normalized potential is exactly `V_ℓ` (closed-form solutions apply).
    pub fn is_pure_quartic(&self) -> bool {
        matches!(self.kind, PotentialKind::Quartic(_))
    }

    /// The `order`-th derivative of the normalized potential at `x`.
    pub fn eval(&self, x: f64, order: usize) -> f64 {
        match &self.shape {
            Shape::Poly(c) => poly_derivative(c, x, order),
            Shape::Cosine { s } => {
                let (sn, cs) = (s * x).sin_cos();
                let base = match order % 4 {
                    0 => -cs,
                    1 => sn,
                    2 => cs,
                    _ => -sn,
                };
                let v = s.powi(order as i32 - 2) * base;
                if order == 0 {
                    v + 1.0 / (s * s)
                } else {
                    v
                }
            }
        }
    }

    /// `V(x)`.
    pub fn value(&self, x: f64) -> f64 {
        self.eval(x, 0)
    }

    /// Restoring force `-V'(x)`.
    pub fn force(&self, x: f64) -> f64 {
        -self.eval(x, 1)
    }

    /// Divided difference `(V(a) - V(b)) / (a - b)`, evaluated without
    /// cancellation; equals `V'(a)` when `a == b`.
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        match &self.shape {
            Shape::Poly(c) => {
                // Σ c_k (a^{k-1} + a^{k-2} b + ... + b^{k-1})
                let mut sum = 0.0;
                let mut h = 1.0; // complete homogeneous sum of degree k-1
                let mut bp = 1.0; // b^{k-1}
                for (k, &ck) in c.iter().enumerate().skip(1) {
                    if k > 1 {
                        bp *= b;
                        h = a * h + bp;
                    }
                    sum += ck * h;
                }
                sum
            }
            Shape::Cosine { s } => {
                let half = 0.5 * s * (a - b);
                (0.5 * s * (a + b)).sin() * sinc(half) / s
            }
        }
    }

    /// `𝒱⁽ᵒʳᵈᵉʳ⁾(q)` of the physical potential.
    pub fn physical_eval(&self, q: f64, order: usize) -> f64 {
        match &self.kind {
            PotentialKind::Pendulum => match order % 4 {
                0 if order == 0 => 1.0 - q.cos(),
                0 => -q.cos(),
                1 => q.sin(),
                2 => q.cos(),
                _ => -q.sin(),
            },
            PotentialKind::Polynomial(a) => poly_derivative(a, q, order),
            _ => self.eval(q, order),
        }
    }

    /// Maps dimensionless `(x, t, v)` to physical `(q, τ, ν)`.
    pub fn to_physical(&self, x: f64, t: f64, v: f64) -> (f64, f64, f64) {
        (self.mu * x + self.q_star, t / self.omega, self.mu * self.omega * v)
    }

    /// Inverse of [`to_physical`](Self::to_physical).
    pub fn to_normalized(&self, q: f64, tau: f64, nu: f64) -> (f64, f64, f64) {
        ((q - self.q_star) / self.mu, self.omega * tau, nu / (self.mu * self.omega))
    }

    /// Periodic band in physical velocity units.
    pub fn v_max_physical(&self) -> f64 {
        self.v_max * self.mu * self.omega
    }

    /// Rejects `|v| ≥ v_max`.
    pub fn check_band(&self, v: f64) -> Result<()> {
        if !v.is_finite() || v.abs() >= self.v_max {
            return Err(Error::PeriodicBand { v: v.abs(), v_max: self.v_max });
        }
        Ok(())
    }

    /// First critical point of `V` beyond the origin in direction `dir` (±1),
    /// or `None` when `V` increases without bound on that side.
    pub fn barrier(&self, dir: f64) -> Option<f64> {
        match &self.shape {
            Shape::Cosine { s } => Some(dir * std::f64::consts::PI / s),
            Shape::Poly(c) => {
                let reach = cauchy_bound(&derivative_coeffs(c)).max(1.0);
                let n = 20_000;
                let h = reach / n as f64;
                let dv = |x: f64| self.eval(x, 1);
                let mut prev = h * 1e-3;
                for i in 1..=n {
                    let x = i as f64 * h;
                    if dv(dir * x) * dir <= 0.0 {
                        let root = brent(dv, dir * prev, dir * x, 1e-15).unwrap_or(dir * x);
                        return Some(root);
                    }
                    prev = x;
                }
                None
            }
        }
    }

    fn compute_band(&self) -> Result<f64> {
        let barrier_energy = [1.0, -1.0]
            .iter()
            .filter_map(|&d| self.barrier(d))
            .map(|x| self.value(x))
            .fold(f64::INFINITY, f64::min);
        if barrier_energy <= 0.0 {
            return Err(Error::Potential("origin is not a strict local minimum".into()));
        }
        Ok((2.0 * barrier_energy).sqrt())
    }
}

/// The periodic band `v_max` of a potential.
pub fn periodic_band(p: &PotentialSpec) -> f64 {
    p.v_max
}

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

fn trim_trailing_zeros(c: &mut Vec<f64>) {
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
}

fn derivative_coeffs(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| k as f64 * a).collect()
}

/// Bound on the magnitude of all complex roots.
fn cauchy_bound(c: &[f64]) -> f64 {
    let Some(lead) = c.iter().rposition(|&a| a != 0.0) else {
        return 0.0;
    };
    1.0 + c[..lead].iter().map(|a| (a / c[lead]).abs()).fold(0.0, f64::max)
}

fn poly_derivative(c: &[f64], x: f64, order: usize) -> f64 {
    let mut acc = 0.0;
    for k in (order..c.len()).rev() {
        let falling: f64 = ((k - order + 1)..=k).map(|j| j as f64).product();
        acc = acc * x + c[k] * falling;
    }
    acc
}

/// Taylor coefficients of `p(x0 + y)` in `y`.
fn taylor_shift(c: &[f64], x0: f64) -> Vec<f64> {
    let mut d = c.to_vec();
    let n = d.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            d[j] += x0 * d[j + 1];
        }
    }
    d
}

type Normalized = (f64, f64, f64, f64, Ell, Shape);

fn normalize_polynomial(a: &[f64]) -> Result<Normalized> {
    let mut a = a.to_vec();
    trim_trailing_zeros(&mut a);
    if a.len() < 5 {
        return Err(Error::Potential(
            "polynomial must have degree at least 4 for a quartic normal form".into(),
        ));
    }
    let q_star = locate_minimum(&a)?;
    let d = taylor_shift(&a, q_star);
    let (d2, d3, d4) = (d[2], d[3], d[4]);
    if d2 <= 0.0 {
        return Err(Error::Potential(format!(
            "V''(q*) = {} is not positive at q* = {q_star}",
            2.0 * d2
        )));
    }
    if d4 == 0.0 {
        return Err(Error::Potential("V''''(q*) = 0: degenerate at quartic order".into()));
    }
    let mass = 1.0;
    let vpp = 2.0 * d2;
    let v4 = 24.0 * d4;
    let omega = (vpp / mass).sqrt();
    let mu = (6.0 * vpp / v4.abs()).sqrt();
    let ell = Ell::from_sign(v4).unwrap();
    // c_k = d_k μ^k / (m μ² ω²)
    let scale = mass * mu * mu * omega * omega;
    let mut c: Vec<f64> = d
        .iter()
        .enumerate()
        .map(|(k, &dk)| dk * mu.powi(k as i32) / scale)
        .collect();
    let cubic = d3 * mu.powi(3) / scale;
    if cubic.abs() > 1e-8 {
        return Err(Error::Potential(format!(
            "normalized cubic coefficient {cubic:e} is nonzero; the quartic normal form needs V'''(q*) = 0"
        )));
    }
    c[0] = 0.0;
    c[1] = 0.0;
    c[2] = 0.5;
    c[3] = 0.0;
    c[4] = ell.sign() / 4.0;
    Ok((q_star, mass, omega, mu, ell, Shape::Poly(c)))
}

/// The strict local minimum of the polynomial closest to the origin.
fn locate_minimum(a: &[f64]) -> Result<f64> {
    let da = derivative_coeffs(a);
    let reach = cauchy_bound(&da).max(1.0);
    let n = 200_000;
    let h = 2.0 * reach / n as f64;
    let dv = |q: f64| poly_derivative(a, q, 1);
    let mut best: Option<f64> = None;
    let mut consider = |q: f64| {
        if poly_derivative(a, q, 2) > 0.0 && best.is_none_or(|b| q.abs() < b.abs()) {
            best = Some(q);
        }
    };
    let mut x0 = -reach;
    let mut f0 = dv(x0);
    for i in 1..=n {
        let x1 = -reach + i as f64 * h;
        let f1 = dv(x1);
        if f0 == 0.0 {
            consider(x0);
        } else if f0 < 0.0 && f1 > 0.0 {
            if let Ok(r) = brent(dv, x0, x1, 1e-15) {
                consider(r);
            }
        }
        x0 = x1;
        f0 = f1;
    }
    best.ok_or_else(|| Error::Potential("no strict local minimum found".into()))
}
