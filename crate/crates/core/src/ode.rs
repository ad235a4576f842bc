//! Integrators for the planar system `ẋ = y, ẏ = F(x)`.
//!
//! [`Dopri5`] is the Dormand–Prince 5(4) embedded pair with the standard
//! fourth-order continuous extension. [`velocity_verlet`] is the fixed-step
//! second-order symplectic scheme.

use crate::error::{Error, Result};

pub type State = [f64; 2];

// Dormand–Prince tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One accepted step with its continuous extension.
#[derive(Debug, Clone)]
struct DenseStep {
    t0: f64,
    h: f64,
    rcont: [State; 5],
}

impl DenseStep {
    fn eval(&self, t: f64) -> State {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        let r = &self.rcont;
        let mut out = [0.0; 2];
        for i in 0..2 {
            out[i] = r[0][i]
                + theta * (r[1][i] + theta1 * (r[2][i] + theta * (r[3][i] + theta1 * r[4][i])));
        }
        out
    }
}

/// Dense-output solution over `[0, t_end]`.
#[derive(Debug, Clone)]
pub struct DenseSolution {
    steps: Vec<DenseStep>,
    t_end: f64,
    y_end: State,
    /// Accepted step end points, starting with the initial condition.
    pub nodes: Vec<(f64, State)>,
}

impl DenseSolution {
    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn final_state(&self) -> State {
        self.y_end
    }

    /// State at any `t ∈ [0, t_end]`.
    pub fn eval(&self, t: f64) -> State {
        if self.steps.is_empty() || t >= self.t_end {
            return self.y_end;
        }
        let idx = self.steps.partition_point(|s| s.t0 + s.h <= t);
        let step = &self.steps[idx.min(self.steps.len() - 1)];
        step.eval(t)
    }
}

/// Adaptive Dormand–Prince 5(4) integrator settings.
#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_max: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 { rtol: tol, atol: tol, max_steps: 2_000_000, h_max: 0.5 }
    }

    /// Integrates `ẋ = y, ẏ = force(x)` from `y0` at `t = 0` to `t_end`.
    pub fn solve<F: Fn(f64) -> f64>(&self, force: F, y0: State, t_end: f64) -> Result<DenseSolution> {
        let rhs = |y: &State| -> State { [y[1], force(y[0])] };
        let mut t = 0.0;
        let mut y = y0;
        let mut steps = Vec::new();
        let mut nodes = vec![(0.0, y0)];
        if t_end <= 0.0 {
            return Ok(DenseSolution { steps, t_end: 0.0, y_end: y0, nodes });
        }
        let mut k1 = rhs(&y);
        let mut h = self.initial_step(&rhs, &y, &k1).min(t_end).min(self.h_max);
        let mut accepted_after_reject = true;
        for _ in 0..self.max_steps {
            if t >= t_end {
                break;
            }
            let last = t + h >= t_end;
            if last {
                h = t_end - t;
            }
            if h < 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::Integration(format!("step size underflow at t = {t}")));
            }
            let add = |coef: &[(f64, &State)]| -> State {
                let mut out = y;
                for (c, k) in coef {
                    out[0] += h * c * k[0];
                    out[1] += h * c * k[1];
                }
                out
            };
            let k2 = rhs(&add(&[(A21, &k1)]));
            let k3 = rhs(&add(&[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(&add(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(&add(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let y6 = add(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
            let k6 = rhs(&y6);
            let y_new = add(&[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = rhs(&y_new);

            let mut err = 0.0;
            for i in 0..2 {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / 2.0).sqrt();
            if !err.is_finite() {
                return Err(Error::Integration(format!("non-finite error estimate at t = {t}")));
            }

            if err <= 1.0 {
                let mut rcont = [[0.0; 2]; 5];
                for i in 0..2 {
                    let ydiff = y_new[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    rcont[0][i] = y[i];
                    rcont[1][i] = ydiff;
                    rcont[2][i] = bspl;
                    rcont[3][i] = ydiff - h * k7[i] - bspl;
                    rcont[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                            + D7 * k7[i]);
                }
                steps.push(DenseStep { t0: t, h, rcont });
                t = if last { t_end } else { t + h };
                y = y_new;
                k1 = k7;
                nodes.push((t, y));
                let mut fac = (0.9 * err.max(1e-10).powf(-0.2)).min(5.0);
                if !accepted_after_reject {
                    fac = fac.min(1.0);
                }
                accepted_after_reject = true;
                h = (h * fac).min(self.h_max);
            } else {
                accepted_after_reject = false;
                h *= (0.9 * err.powf(-0.2)).max(0.2);
            }
        }
        if t < t_end {
            return Err(Error::Integration(format!(
                "exceeded {} steps before reaching t = {t_end}",
                self.max_steps
            )));
        }
        Ok(DenseSolution { steps, t_end, y_end: y, nodes })
    }

    fn initial_step(&self, rhs: &impl Fn(&State) -> State, y: &State, f0: &State) -> f64 {
        let sc = |i: usize| self.atol + self.rtol * y[i].abs();
        let d0 = ((0..2).map(|i| (y[i] / sc(i)).powi(2)).sum::<f64>() / 2.0).sqrt();
        let d1 = ((0..2).map(|i| (f0[i] / sc(i)).powi(2)).sum::<f64>() / 2.0).sqrt();
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let y1 = [y[0] + h0 * f0[0], y[1] + h0 * f0[1]];
        let f1 = rhs(&y1);
        let d2 = ((0..2).map(|i| ((f1[i] - f0[i]) / sc(i)).powi(2)).sum::<f64>() / 2.0).sqrt() / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1)
    }
}

/// Fixed-step velocity Verlet. Returns `(t, x, ẋ)` at every step.
pub fn velocity_verlet<F: Fn(f64) -> f64>(force: F, y0: State, t_end: f64, step: f64) -> Vec<(f64, State)> {
    let n = (t_end / step).ceil().max(0.0) as usize;
    let h = if n == 0 { 0.0 } else { t_end / n as f64 };
    let mut out = Vec::with_capacity(n + 1);
    let [mut x, mut v] = y0;
    let mut a = force(x);
    out.push((0.0, y0));
    for i in 1..=n {
        let v_half = v + 0.5 * h * a;
        x += h * v_half;
        a = force(x);
        v = v_half + 0.5 * h * a;
        out.push((i as f64 * h, [x, v]));
    }
    out
}
