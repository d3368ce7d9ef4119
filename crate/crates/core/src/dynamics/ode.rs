//! Explicit Runge–Kutta integrators: adaptive Fehlberg 4(5) with sign-change
//! event location, and classical fixed-step RK4.

use std::fmt;

/// Step control for [`rkf45`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; `0` picks `|t_end − t0|·1e-3`.
    pub h_init: f64,
    /// Smallest step, relative to `max(1, |t|)`.
    pub h_min_rel: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: 0.0, h_min_rel: 1e-14, h_max: f64::INFINITY, max_steps: 1_000_000 }
    }
}

/// Which sign changes of an event function count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Crossing {
    /// Negative to non-negative.
    Rising,
    /// Positive to non-positive.
    Falling,
    Either,
}

impl Crossing {
    fn triggers(self, before: f64, after: f64) -> bool {
        match self {
            Crossing::Rising => before < 0.0 && after >= 0.0,
            Crossing::Falling => before > 0.0 && after <= 0.0,
            Crossing::Either => (before < 0.0 && after >= 0.0) || (before > 0.0 && after <= 0.0),
        }
    }
}

/// Stop at the first crossing of `g(t, y) = 0`, located by bisection to `t_tol`.
pub struct Event<'a> {
    pub g: &'a dyn Fn(f64, &[f64]) -> f64,
    pub crossing: Crossing,
    pub t_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    Event,
    /// The step size fell below its floor; `reason` is the last failure.
    StepUnderflow { t: f64, reason: String },
    MaxSteps { t: f64 },
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Termination::Completed => write!(f, "completed"),
            Termination::Event => write!(f, "event"),
            Termination::StepUnderflow { t, reason } => write!(f, "step-size underflow at t = {t}: {reason}"),
            Termination::MaxSteps { t } => write!(f, "step limit reached at t = {t}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub termination: Termination,
    pub accepted: usize,
    pub rejected: usize,
}

impl OdeSolution {
    pub fn last(&self) -> (f64, &[f64]) {
        (*self.t.last().expect("solution holds the initial state"), self.y.last().expect("non-empty"))
    }
}

// Fehlberg 4(5) tableau.
const C: [f64; 6] = [0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5];
const A: [[f64; 5]; 6] = [
    [0.0; 5],
    [0.25, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 32.0, 9.0 / 32.0, 0.0, 0.0, 0.0],
    [1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0, 0.0, 0.0],
    [439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0, 0.0],
    [-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0],
];
const B5: [f64; 6] = [16.0 / 135.0, 0.0, 6656.0 / 12825.0, 28561.0 / 56430.0, -9.0 / 50.0, 2.0 / 55.0];
const B4: [f64; 6] = [25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -1.0 / 5.0, 0.0];

/// One Fehlberg step; returns the 5th-order solution and the error estimate.
pub fn rkf45_step<F, E>(f: &mut F, t: f64, y: &[f64], h: f64) -> Result<(Vec<f64>, Vec<f64>), E>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, E>,
{
    let n = y.len();
    let mut k: Vec<Vec<f64>> = Vec::with_capacity(6);
    for s in 0..6 {
        let stage: Vec<f64> = (0..n).map(|i| y[i] + h * (0..s).map(|j| A[s][j] * k[j][i]).sum::<f64>()).collect();
        k.push(f(t + C[s] * h, &stage)?);
    }
    let y5: Vec<f64> = (0..n).map(|i| y[i] + h * (0..6).map(|s| B5[s] * k[s][i]).sum::<f64>()).collect();
    let err: Vec<f64> = (0..n).map(|i| h * (0..6).map(|s| (B5[s] - B4[s]) * k[s][i]).sum::<f64>()).collect();
    Ok((y5, err))
}

fn error_norm(y0: &[f64], y1: &[f64], err: &[f64], opts: &OdeOptions) -> f64 {
    y0.iter()
        .zip(y1)
        .zip(err)
        .map(|((a, b), e)| e.abs() / (opts.atol + opts.rtol * a.abs().max(b.abs())))
        .fold(0.0, f64::max)
}

/// Adaptive Fehlberg 4(5) from `t0` to `t_end` (either direction). RHS errors
/// reject the step and shrink it, so integration can approach but not cross a
/// domain boundary; it ends with [`Termination::StepUnderflow`] there.
pub fn rkf45<F, E>(mut f: F, t0: f64, y0: &[f64], t_end: f64, opts: &OdeOptions, event: Option<&Event>) -> OdeSolution
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, E>,
    E: fmt::Display,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut h = if opts.h_init > 0.0 { opts.h_init } else { (span * 1e-3).max(f64::MIN_POSITIVE) };
    h = h.min(opts.h_max);
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut sol = OdeSolution { t: vec![t0], y: vec![y.clone()], termination: Termination::Completed, accepted: 0, rejected: 0 };
    let mut g_prev = event.map(|ev| (ev.g)(t, &y));
    if span == 0.0 {
        return sol;
    }
    loop {
        if sol.accepted + sol.rejected >= opts.max_steps {
            sol.termination = Termination::MaxSteps { t };
            return sol;
        }
        let remaining = (t_end - t) * dir;
        let last = h >= remaining;
        let step = if last { remaining } else { h };
        let h_min = opts.h_min_rel * t.abs().max(1.0);
        match rkf45_step(&mut f, t, &y, dir * step) {
            Ok((y_new, err)) => {
                let norm = error_norm(&y, &y_new, &err, opts);
                if norm <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                    let t_new = if last { t_end } else { t + dir * step };
                    if let (Some(ev), Some(gp)) = (event, g_prev) {
                        let g_new = (ev.g)(t_new, &y_new);
                        if ev.crossing.triggers(gp, g_new) {
                            if let Some((te, ye)) = locate_event(&mut f, ev, t, &y, gp, dir * step) {
                                sol.t.push(te);
                                sol.y.push(ye);
                                sol.accepted += 1;
                                sol.termination = Termination::Event;
                                return sol;
                            }
                        }
                        g_prev = Some(g_new);
                    }
                    t = t_new;
                    y = y_new;
                    sol.t.push(t);
                    sol.y.push(y.clone());
                    sol.accepted += 1;
                    if last {
                        return sol;
                    }
                    let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                    h = (step * factor).min(opts.h_max);
                } else {
                    sol.rejected += 1;
                    let factor = if norm.is_finite() { (0.9 * norm.powf(-0.25)).clamp(0.1, 0.9) } else { 0.1 };
                    h = step * factor;
                    if h < h_min {
                        sol.termination =
                            Termination::StepUnderflow { t, reason: format!("error norm {norm:e} at minimum step") };
                        return sol;
                    }
                }
            }
            Err(e) => {
                sol.rejected += 1;
                h = step * 0.1;
                if h < h_min {
                    sol.termination = Termination::StepUnderflow { t, reason: e.to_string() };
                    return sol;
                }
            }
        }
    }
}

/// Bisects a single step of size `s ∈ (0, |h|]` from `(t, y)` until the bracket
/// is below `t_tol`. Returns the state on the far side of the crossing.
fn locate_event<F, E>(f: &mut F, ev: &Event, t: f64, y: &[f64], g0: f64, h: f64) -> Option<(f64, Vec<f64>)>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, E>,
{
    let dir = h.signum();
    let (mut lo, mut hi) = (0.0_f64, h.abs());
    let mut g_lo = g0;
    let tol = ev.t_tol.max(4.0 * f64::EPSILON * t.abs().max(1.0));
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let (ym, _) = rkf45_step(f, t, y, dir * mid).ok()?;
        let gm = (ev.g)(t + dir * mid, &ym);
        if ev.crossing.triggers(g_lo, gm) {
            hi = mid;
        } else {
            lo = mid;
            g_lo = gm;
        }
    }
    let (yh, _) = rkf45_step(f, t, y, dir * hi).ok()?;
    Some((t + dir * hi, yh))
}

/// Classical RK4 step.
pub fn rk4_step<F, E>(f: &mut F, t: f64, y: &[f64], h: f64) -> Result<Vec<f64>, E>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, E>,
{
    let n = y.len();
    let axpy = |a: &[f64], s: f64, b: &[f64]| -> Vec<f64> { (0..n).map(|i| a[i] + s * b[i]).collect() };
    let k1 = f(t, y)?;
    let k2 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k1))?;
    let k3 = f(t + 0.5 * h, &axpy(y, 0.5 * h, &k2))?;
    let k4 = f(t + h, &axpy(y, h, &k3))?;
    Ok((0..n).map(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect())
}

/// Fixed-step RK4 with `steps` equal steps; returns every node.
pub fn rk4<F, E>(mut f: F, t0: f64, y0: &[f64], t_end: f64, steps: usize) -> Result<OdeSolution, E>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>, E>,
{
    let steps = steps.max(1);
    let h = (t_end - t0) / steps as f64;
    let mut sol = OdeSolution { t: vec![t0], y: vec![y0.to_vec()], termination: Termination::Completed, accepted: 0, rejected: 0 };
    let mut y = y0.to_vec();
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        y = rk4_step(&mut f, t, &y, h)?;
        sol.t.push(if i + 1 == steps { t_end } else { t + h });
        sol.y.push(y.clone());
        sol.accepted += 1;
    }
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    fn oscillator(_t: f64, y: &[f64]) -> Result<Vec<f64>, Infallible> {
        Ok(vec![y[1], -y[0]])
    }

    #[test]
    fn exponential_decay_matches_closed_form() {
        let sol = rkf45(|_t, y: &[f64]| Ok::<_, Infallible>(vec![-2.0 * y[0]]), 0.0, &[1.0], 3.0, &OdeOptions::default(), None);
        assert_eq!(sol.termination, Termination::Completed);
        let (t, y) = sol.last();
        assert_eq!(t, 3.0);
        assert!((y[0] - (-6.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn backwards_integration() {
        let sol = rkf45(oscillator, 1.0, &[1.0f64.cos(), -1.0f64.sin()], 0.0, &OdeOptions::default(), None);
        let (_, y) = sol.last();
        assert!((y[0] - 1.0).abs() < 1e-9 && y[1].abs() < 1e-9);
    }

    #[test]
    fn oscillator_event_finds_pi() {
        let g = |_t: f64, y: &[f64]| y[0];
        let ev = Event { g: &g, crossing: Crossing::Falling, t_tol: 1e-13 };
        let sol = rkf45(oscillator, 0.0, &[0.0, 1.0], 10.0, &OdeOptions::default(), Some(&ev));
        assert_eq!(sol.termination, Termination::Event);
        let (t, _) = sol.last();
        assert!((t - std::f64::consts::PI).abs() < 1e-9, "{t}");
    }

    #[test]
    fn rhs_failure_truncates() {
        let f = |_t: f64, y: &[f64]| if y[0] > 2.0 { Err("outside domain") } else { Ok(vec![1.0]) };
        let sol = rkf45(f, 0.0, &[0.0], 5.0, &OdeOptions::default(), None);
        match sol.termination {
            Termination::StepUnderflow { t, ref reason } => {
                assert!((t - 2.0).abs() < 1e-6, "{t}");
                assert_eq!(reason, "outside domain");
            }
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rk4_fourth_order_convergence() {
        let err = |n| {
            let s = rk4(oscillator, 0.0, &[0.0, 1.0], 1.0, n).unwrap();
            (s.last().1[0] - 1.0f64.sin()).abs()
        };
        let ratio = err(50) / err(100);
        assert!((ratio - 16.0).abs() < 1.0, "{ratio}");
    }
}
