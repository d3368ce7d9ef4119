//! Conformally flat metrics `g = f²(s) G` with `s = √(x̃Gx)`.

use std::sync::Arc;

use crate::geometry::{Chart, GeometryError, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};

use super::spherical::Minkowski;

/// Smallest interval `s` accepted as timelike.
pub const MIN_INTERVAL: f64 = 1e-8;

/// Conformal factor `f(s)` with optional closed-form derivatives.
pub trait ConformalFactor: Send + Sync {
    fn f(&self, s: f64) -> f64;

    fn df(&self, _s: f64) -> Option<f64> {
        None
    }

    fn d2f(&self, _s: f64) -> Option<f64> {
        None
    }

    fn label(&self) -> String;
}

impl<T: ConformalFactor + ?Sized> ConformalFactor for Arc<T> {
    fn f(&self, s: f64) -> f64 {
        (**self).f(s)
    }
    fn df(&self, s: f64) -> Option<f64> {
        (**self).df(s)
    }
    fn d2f(&self, s: f64) -> Option<f64> {
        (**self).d2f(s)
    }
    fn label(&self) -> String {
        (**self).label()
    }
}

fn fd_step(s: f64) -> f64 {
    1e-4 * s.abs().max(1e-3)
}

/// `f′(s)`, closed form or 5-point differences.
pub fn factor_d1<F: ConformalFactor + ?Sized>(ff: &F, s: f64) -> f64 {
    ff.df(s).unwrap_or_else(|| {
        let h = fd_step(s);
        (-ff.f(s + 2.0 * h) + 8.0 * ff.f(s + h) - 8.0 * ff.f(s - h) + ff.f(s - 2.0 * h)) / (12.0 * h)
    })
}

/// `f″(s)`, closed form or 5-point differences of `f′`.
pub fn factor_d2<F: ConformalFactor + ?Sized>(ff: &F, s: f64) -> f64 {
    ff.d2f(s).unwrap_or_else(|| {
        let h = fd_step(s);
        let d = |t: f64| factor_d1(ff, t);
        (-d(s + 2.0 * h) + 8.0 * d(s + h) - 8.0 * d(s - h) + d(s - 2.0 * h)) / (12.0 * h)
    })
}

/// `f ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct UnitFactor;

impl ConformalFactor for UnitFactor {
    fn f(&self, _s: f64) -> f64 {
        1.0
    }
    fn df(&self, _s: f64) -> Option<f64> {
        Some(0.0)
    }
    fn d2f(&self, _s: f64) -> Option<f64> {
        Some(0.0)
    }
    fn label(&self) -> String {
        "f=1".into()
    }
}

/// `f = 1/(a − b s²)`; all eigenvalues of `g⁻¹R` equal `ρ = 12ab`.
#[derive(Debug, Clone, Copy)]
pub struct MaximallyUniform {
    pub a: f64,
    pub b: f64,
}

impl MaximallyUniform {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// `f = 1/(1 − ρs²/12)`.
    pub fn from_density(rho: f64) -> Self {
        Self { a: 1.0, b: rho / 12.0 }
    }

    pub fn density(&self) -> f64 {
        12.0 * self.a * self.b
    }

    /// Largest `s` with `a − b s² > 0` (infinite when `b ≤ 0`).
    pub fn horizon(&self) -> f64 {
        if self.b > 0.0 {
            (self.a / self.b).sqrt()
        } else {
            f64::INFINITY
        }
    }
}

impl ConformalFactor for MaximallyUniform {
    fn f(&self, s: f64) -> f64 {
        1.0 / (self.a - self.b * s * s)
    }
    fn df(&self, s: f64) -> Option<f64> {
        let q = self.a - self.b * s * s;
        Some(2.0 * self.b * s / (q * q))
    }
    fn d2f(&self, s: f64) -> Option<f64> {
        let q = self.a - self.b * s * s;
        Some(2.0 * self.b / (q * q) + 8.0 * self.b * self.b * s * s / (q * q * q))
    }
    fn label(&self) -> String {
        format!("f=1/({}-{}s^2)", self.a, self.b)
    }
}

/// Wraps a closure `f(s)`; derivatives come from finite differences.
#[derive(Clone)]
pub struct FnFactor<F> {
    f: F,
    label: String,
}

impl<F: Fn(f64) -> f64 + Send + Sync> FnFactor<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        Self { f, label: label.into() }
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> ConformalFactor for FnFactor<F> {
    fn f(&self, s: f64) -> f64 {
        (self.f)(s)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `g = f²(s) G` over Cartesian coordinates; timelike region only.
#[derive(Clone)]
pub struct FriedmannLobachevsky<F> {
    pub factor: F,
    s_range: (f64, f64),
}

impl<F: ConformalFactor> FriedmannLobachevsky<F> {
    pub fn new(factor: F) -> Self {
        Self { factor, s_range: (0.5, 3.0) }
    }

    /// Interval range `[lo, hi]` of sampled points.
    pub fn with_sample_interval(mut self, lo: f64, hi: f64) -> Self {
        self.s_range = (lo, hi);
        self
    }

    /// `s² = x̃Gx`.
    pub fn interval_squared(x: &ColumnVector) -> f64 {
        x[3] * x[3] - x[0] * x[0] - x[1] * x[1] - x[2] * x[2]
    }
}

impl<F: ConformalFactor> MetricField for FriedmannLobachevsky<F> {
    fn name(&self) -> String {
        format!("friedmann-lobachevsky[{}]", self.factor.label())
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Conformal
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        let s2 = Self::interval_squared(x);
        if s2 <= MIN_INTERVAL * MIN_INTERVAL {
            return Some(format!("spacelike or null point (s^2 = {s2:e})"));
        }
        let f = self.factor.f(s2.sqrt());
        if !(f > 0.0) || !f.is_finite() {
            return Some(format!("conformal factor f(s) = {f} not positive"));
        }
        None
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        let s = Self::interval_squared(x).sqrt();
        let f = self.factor.f(s);
        Ok(Minkowski::signature(4).scale(f * f))
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        let s = Self::interval_squared(x).sqrt();
        let f = self.factor.f(s);
        let df = factor_d1(&self.factor, s);
        let g0 = Minkowski::signature(4);
        let gx = g0.mat_vec(x)?;
        Ok(Some((0..4).map(|c| g0.scale(2.0 * f * df * gx[c] / s)).collect()))
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        let (_, hi) = self.s_range;
        vec![(-0.6 * hi, 0.6 * hi), (-0.6 * hi, 0.6 * hi), (-0.6 * hi, 0.6 * hi), (0.0, 2.0 * hi)]
    }
    /// `g` depends on `s` only and `∂s/∂x_e = ±x_e/s`, so it varies over
    /// `s²/max(s, |x_e|)` along axis `e`.
    fn step_scale(&self, x: &ColumnVector, axis: usize) -> f64 {
        let s = Self::interval_squared(x).max(0.0).sqrt();
        let coord = x[axis].abs().max(1.0);
        let along = s * s / s.max(x[axis].abs());
        if along > 0.0 {
            coord.min(along)
        } else {
            coord
        }
    }
    fn sample_filter(&self, x: &ColumnVector) -> bool {
        let s2 = Self::interval_squared(x);
        let (lo, hi) = self.s_range;
        x[3] > 0.0 && s2 >= lo * lo && s2 <= hi * hi
    }
}
