//! Closed-form 4-velocities, plane-orbit constants, perihelion precession and
//! extreme transverse velocities.

use std::f64::consts::PI;

use crate::geometry::{eval, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};
use crate::metrics::{GeneralSpherical, SphericalSolutionParams, WeakSpherical};

use super::ode::{rkf45, Crossing, Event, OdeOptions, Termination};
use super::DynamicsError;

/// Radians to arcseconds.
pub const ARCSEC_PER_RADIAN: f64 = 648_000.0 / PI;

/// Radicands within this many ulps of their scale are treated as zero.
const RADICAND_ULPS: f64 = 64.0;

/// `√q`, with `|q| ≤ 64ε·scale` taken as an exact zero.
fn checked_sqrt(q: f64, scale: f64, quantity: &'static str) -> Result<f64, DynamicsError> {
    if q.abs() <= RADICAND_ULPS * f64::EPSILON * scale.abs() {
        Ok(0.0)
    } else if q > 0.0 {
        Ok(q.sqrt())
    } else {
        Err(DynamicsError::ForbiddenRegion { quantity, value: q })
    }
}

/// Integration constants of the geodesic equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionConstants {
    pub c1: f64,
    pub c2: f64,
    /// Sign of `u₃`, ±1.
    pub c3: f64,
    pub c4: f64,
}

impl MotionConstants {
    pub fn new(c1: f64, c2: f64, c3: f64, c4: f64) -> Result<Self, DynamicsError> {
        if c3 != 1.0 && c3 != -1.0 {
            return Err(DynamicsError::InvalidParameter(format!("c3 must be +1 or -1, got {c3}")));
        }
        Ok(Self { c1, c2, c3, c4 })
    }
}

/// `u` from the metric at `x` (`x₁ = ϑ`, `x₃ = r`):
/// `u₁ = −√(c₁² − c₂²cot²x₁)/g₁₁`, `u₂ = −c₂/g₂₂`,
/// `u₃ = c₃√(g₄₄g₃₃((c₁²+c₂²)/x₃² − g₃₃) + c₄²g₃₃²)`, `u₄ = −(c₄ + g₃₄u₃)/g₄₄`.
fn four_velocity_from_metric(g: &SquareMatrix, x: &ColumnVector, k: &MotionConstants) -> Result<ColumnVector, DynamicsError> {
    let (g11, g22, g33, g34, g44) = (g[(0, 0)], g[(1, 1)], g[(2, 2)], g[(2, 3)], g[(3, 3)]);
    let cot = x[0].cos() / x[0].sin();
    let a1 = k.c1 * k.c1;
    let a2 = k.c2 * k.c2 * cot * cot;
    let u1 = -checked_sqrt(a1 - a2, a1.max(a2) + k.c2 * k.c2, "c1^2 - c2^2 cot^2 x1")? / g11;
    let u2 = -k.c2 / g22;
    let l2 = (k.c1 * k.c1 + k.c2 * k.c2) / (x[2] * x[2]);
    let t1 = g44 * g33 * (l2 - g33);
    let t2 = k.c4 * k.c4 * g33 * g33;
    let u3 = k.c3 * checked_sqrt(t1 + t2, t1.abs().max(t2.abs()), "radial 4-velocity radicand")?;
    let u4 = -(k.c4 + g34 * u3) / g44;
    Ok(ColumnVector::from(vec![u1, u2, u3, u4]))
}

/// Largest `|ũgu − 1|` accepted from the closed-form velocities.
pub const VELOCITY_NORMALIZATION_TOL: f64 = 1e-8;

fn normalized<M: MetricField>(field: &M, x: &ColumnVector, k: &MotionConstants) -> Result<ColumnVector, DynamicsError> {
    let g = eval(field, x)?;
    let u = four_velocity_from_metric(&g, x, k)?;
    let norm = g.bilinear(&u, &u);
    if (norm - 1.0).abs() > VELOCITY_NORMALIZATION_TOL {
        return Err(DynamicsError::NotNormalized { value: norm });
    }
    Ok(u)
}

/// Closed-form `u` of the general static solution; `ũgu = 1` is checked.
pub fn four_velocity_general(
    params: SphericalSolutionParams,
    consts: &MotionConstants,
    x: &ColumnVector,
) -> Result<ColumnVector, DynamicsError> {
    normalized(&GeneralSpherical::new(params), x, consts)
}

/// Closed-form `u` of the weak metric; `ũgu = 1` is checked.
pub fn four_velocity_weak(
    r_m: f64,
    c7: f64,
    c8: f64,
    consts: &MotionConstants,
    x: &ColumnVector,
) -> Result<ColumnVector, DynamicsError> {
    normalized(&WeakSpherical::new(r_m, c7, c8)?, x, consts)
}

/// Plane orbit between perihelion `p` and aphelion `a` about a central mass of
/// radius `r_M` (all lengths in one unit).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitSpec {
    pub p: f64,
    pub a: f64,
    pub r_m: f64,
}

impl OrbitSpec {
    pub fn new(p: f64, a: f64, r_m: f64) -> Result<Self, DynamicsError> {
        let bad = |m: String| Err(DynamicsError::InvalidOrbit(m));
        if !(p.is_finite() && a.is_finite() && r_m.is_finite()) {
            return bad(format!("non-finite orbit p={p}, a={a}, r_M={r_m}"));
        }
        if !(p > 0.0 && p <= a) {
            return bad(format!("need 0 < p <= a, got p={p}, a={a}"));
        }
        if r_m < 0.0 {
            return bad(format!("r_M must be non-negative, got {r_m}"));
        }
        if p <= 2.0 * r_m {
            return bad(format!("perihelion {p} inside 2 r_M = {}", 2.0 * r_m));
        }
        let spec = Self { p, a, r_m };
        if spec.f2_squared() <= 0.0 {
            return bad(format!("f2 radicand {} not positive (orbit too relativistic)", spec.f2_squared()));
        }
        Ok(spec)
    }

    fn f2_squared(&self) -> f64 {
        let (a, p, r) = (self.a, self.p, self.r_m);
        a * p * (a + p) - 2.0 * r * (a * a + a * p + p * p)
    }

    /// `f₁ = √((a − x₃)(x₃ − p)(a(px₃ − 2r_M(x₃ + p)) − 2r_M p x₃))`.
    pub fn f1(&self, x3: f64) -> Result<f64, DynamicsError> {
        let (a, p, r) = (self.a, self.p, self.r_m);
        let q = (a - x3) * (x3 - p) * (a * (p * x3 - 2.0 * r * (x3 + p)) - 2.0 * r * p * x3);
        if q < 0.0 {
            return Err(DynamicsError::ForbiddenRegion { quantity: "f1 radicand", value: q });
        }
        Ok(q.sqrt())
    }

    /// `f₂ = √(ap(a + p) − 2r_M(a² + ap + p²))`.
    pub fn f2(&self) -> f64 {
        self.f2_squared().sqrt()
    }

    /// `f₃ = √((a + p)(a − 2r_M)(p − 2r_M))`.
    pub fn f3(&self) -> f64 {
        let (a, p, r) = (self.a, self.p, self.r_m);
        ((a + p) * (a - 2.0 * r) * (p - 2.0 * r)).sqrt()
    }

    /// `f₄ = a²p²(a² − p²) + 4(a² + ap + p²)r_M(ap² − r_M(a² + ap + p²))`.
    pub fn f4(&self) -> f64 {
        let (a, p, r) = (self.a, self.p, self.r_m);
        let s = a * a + a * p + p * p;
        a * a * p * p * (a * a - p * p) + 4.0 * s * r * (a * p * p - r * s)
    }

    /// `f₅ = a²p²(a − p)(ap − 2r_M(2a + p))`.
    pub fn f5(&self) -> f64 {
        let (a, p, r) = (self.a, self.p, self.r_m);
        a * a * p * p * (a - p) * (a * p - 2.0 * r * (2.0 * a + p))
    }

    /// `r_M / c₂² = f₂²/(2a²p²)`, finite also for `r_M = 0`.
    pub fn r_m_over_c2_squared(&self) -> f64 {
        self.f2_squared() / (2.0 * self.a * self.a * self.p * self.p)
    }
}

/// `c₁ = 0`, `c₂ = −ap√(2r_M)/f₂`, `c₃ = 1`, `c₄ = f₃/f₂`: the constants for which
/// `u₃` vanishes at `p` and `a`.
pub fn orbit_constants(spec: &OrbitSpec) -> MotionConstants {
    let f2 = spec.f2();
    MotionConstants { c1: 0.0, c2: -spec.a * spec.p * (2.0 * spec.r_m).sqrt() / f2, c3: 1.0, c4: spec.f3() / f2 }
}

/// Metric in which a plane orbit is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitGeometry {
    /// Weak metric with `g₃₄ = −√(2r_M/x₃)`.
    Weak,
    Schwarzschild,
}

/// Forward-in-time `u` on the plane orbit at `x₁ = π/2`:
/// `u₂ = √(2r_M) ap/(f₂x₃²)`, `u₃ = ±√(2r_M) f₁/(f₂x₃^{3/2})`,
/// `u₄ = f₃x₃/(f₂(x₃ − 2r_M))` plus `±2r_M f₁/((x₃ − 2r_M)f₂x₃)` in the weak metric.
/// `outbound` selects the sign of `u₃`.
pub fn plane_orbit_velocity(
    spec: &OrbitSpec,
    x3: f64,
    geometry: OrbitGeometry,
    outbound: bool,
) -> Result<ColumnVector, DynamicsError> {
    let (a, p, r) = (spec.a, spec.p, spec.r_m);
    let f1 = spec.f1(x3)?;
    let f2 = spec.f2();
    let sign = if outbound { 1.0 } else { -1.0 };
    let u2 = (2.0 * r).sqrt() * a * p / (f2 * x3 * x3);
    let u3 = sign * (2.0 * r).sqrt() * f1 / (f2 * x3.powf(1.5));
    let mut u4 = spec.f3() * x3 / (f2 * (x3 - 2.0 * r));
    if geometry == OrbitGeometry::Weak {
        u4 += sign * 2.0 * r * f1 / ((x3 - 2.0 * r) * f2 * x3);
    }
    Ok(ColumnVector::from(vec![0.0, u2, u3, u4]))
}

/// Perihelion advance per revolution in radians, `3π r_M f₄/f₅`.
pub fn precession(spec: &OrbitSpec) -> Result<f64, DynamicsError> {
    let f5 = spec.f5();
    if spec.a == spec.p || f5 == 0.0 {
        return Err(DynamicsError::CircularOrbit);
    }
    Ok(3.0 * PI * spec.r_m * spec.f4() / f5)
}

/// `d²k/dx₂²` of the weak plane orbit, `−k + 3k²r_M + r_M/c₂²`.
pub fn weak_orbit_rhs(r_m: f64, c2: f64, k: f64) -> f64 {
    -k + 3.0 * k * k * r_m + r_m / (c2 * c2)
}

/// `d²k/dx₂²` of the general static solution's plane orbit, `k = 1/x₃`, with
/// `d = (1/k³ − c₅³)^{2/3}` used as a scalar throughout.
pub fn general_orbit_rhs(params: &SphericalSolutionParams, c2: f64, c4: f64, k: f64) -> Result<f64, DynamicsError> {
    let SphericalSolutionParams { c5, c6, c7, .. } = *params;
    let c53 = c5.powi(3);
    let base = 1.0 / k.powi(3) - c53;
    let q = 1.0 - k.powi(3) * c53;
    if !(base > 0.0) || !(q > 0.0) {
        return Err(DynamicsError::ForbiddenRegion { quantity: "1/k^3 - c5^3", value: base });
    }
    let d = base.powf(2.0 / 3.0);
    let q23 = q.powf(2.0 / 3.0);
    let c22 = c2 * c2;
    let c42 = c4 * c4;
    let t = -3.0 * k * k * c22 - 3.0 * d * q23 * c7
        + 3.0 * k.powi(5) * c22 * (d * c6 + c53 * (5.0 - 4.0 * d * c7))
        + 4.0 * k.powi(8) * c22 * c53 * (-2.0 * d * c6 + 3.0 * c53 * (-1.0 + d * c7))
        + 4.0 * k.powi(6) * c53 * q23 * (-2.0 * d * c6 + 3.0 * c53 * (-1.0 + c42 + d * c7))
        + k.powi(3) * q23 * (d * c6 - 3.0 * c53 * (-4.0 + 4.0 * c42 + 3.0 * d * c7));
    Ok(t / (3.0 * k * c22))
}

/// Perihelion advance per revolution in radians from the weak orbit ODE.
///
/// Integrates the deviation `δ = κ − κ_N` from the Newtonian ellipse
/// `κ_N = C + B cos x₂` in units `κ = p k`, starting at perihelion, and locates
/// the next falling zero of `dκ/dx₂` by bisection to `1e-12` in `x₂`. `tol` is the
/// integrator's relative tolerance.
pub fn precession_numeric(spec: &OrbitSpec, tol: f64) -> Result<f64, DynamicsError> {
    if spec.a == spec.p {
        return Err(DynamicsError::CircularOrbit);
    }
    let eps = spec.r_m / spec.p;
    let c = spec.r_m_over_c2_squared() * spec.p;
    let b = 1.0 - c;
    let rhs = |phi: f64, y: &[f64]| -> Result<Vec<f64>, DynamicsError> {
        let kappa = c + b * phi.cos() + y[0];
        Ok(vec![y[1], -y[0] + 3.0 * eps * kappa * kappa])
    };
    let slope = move |phi: f64, y: &[f64]| -b * phi.sin() + y[1];
    let event = Event { g: &slope, crossing: Crossing::Falling, t_tol: 1e-12 };
    let opts = OdeOptions { rtol: tol, atol: tol * eps.max(f64::MIN_POSITIVE), h_max: 0.25, ..OdeOptions::default() };
    let sol = rkf45(rhs, 0.0, &[0.0, 0.0], 4.0 * PI, &opts, Some(&event));
    match sol.termination {
        Termination::Event => Ok(sol.last().0 - 2.0 * PI),
        Termination::Completed => Err(DynamicsError::NoPerihelion),
        other => Err(DynamicsError::Integration(other.to_string())),
    }
}

/// Dimensionless transverse speeds at aphelion (`beta_min`) and perihelion (`beta_max`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeVelocities {
    pub beta_min: f64,
    pub beta_max: f64,
}

/// `β₂max = (a/p)√(2r_M(p − 2r_M)/((a + p)(a − 2r_M)))` and
/// `β₂min = (p/a)√(2r_M(a − 2r_M)/((a + p)(p − 2r_M)))`, as magnitudes.
pub fn extreme_velocities(spec: &OrbitSpec) -> Result<ExtremeVelocities, DynamicsError> {
    let (a, p, r) = (spec.a, spec.p, spec.r_m);
    let q_max = 2.0 * r * (p - 2.0 * r) / ((a + p) * (a - 2.0 * r));
    let q_min = 2.0 * r * (a - 2.0 * r) / ((a + p) * (p - 2.0 * r));
    if q_max < 0.0 {
        return Err(DynamicsError::ForbiddenRegion { quantity: "beta_max radicand", value: q_max });
    }
    if q_min < 0.0 {
        return Err(DynamicsError::ForbiddenRegion { quantity: "beta_min radicand", value: q_min });
    }
    Ok(ExtremeVelocities { beta_min: p / a * q_min.sqrt(), beta_max: a / p * q_max.sqrt() })
}
