//! Static spherically symmetric metrics in the chart `(ϑ, φ, r, ct)`.
//!
//! All of them share the block structure
//!
//! ```text
//! g = diag(−A(r), −A(r) sin²ϑ) ⊕ [[g33, g34], [g34, g44]](r)
//! ```
//!
//! so a single helper assembles `g` and its analytic derivatives from the
//! radial profiles.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::geometry::{Chart, GeometryError, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};

/// Exclusion margin around coordinate singularities.
pub const LOCUS_MARGIN: f64 = 1e-6;
/// Minimum `|sin ϑ|` of a regular point.
pub const MIN_SIN_THETA: f64 = 1e-8;

/// Constants of the general static solution.
///
/// `c5` measures the moving mass, `c6 = 3r_M` the central mass, `c7 = ρ/3`
/// the density and `c8 = ±1` selects the time orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalSolutionParams {
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
}

impl SphericalSolutionParams {
    pub fn new(c5: f64, c6: f64, c7: f64, c8: f64) -> Result<Self, GeometryError> {
        if ![c5, c6, c7, c8].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::InvalidParameter("non-finite solution constant".into()));
        }
        if c5 < 0.0 {
            return Err(GeometryError::InvalidParameter(format!("c5 must be non-negative, got {c5}")));
        }
        if c8 != 1.0 && c8 != -1.0 {
            return Err(GeometryError::InvalidParameter(format!("c8 must be +1 or -1, got {c8}")));
        }
        Ok(Self { c5, c6, c7, c8 })
    }

    /// Constants of the weak solution: `c5 = 0`, `c6 = 3r_M`.
    pub fn weak(r_m: f64, c7: f64, c8: f64) -> Result<Self, GeometryError> {
        Self::new(0.0, 3.0 * r_m, c7, c8)
    }
}

/// Radial profiles of a spherical block metric and their `r`-derivatives.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RadialBlock {
    pub a: f64,
    pub da: f64,
    pub g33: f64,
    pub dg33: f64,
    pub g34: f64,
    pub dg34: f64,
    pub g44: f64,
    pub dg44: f64,
}

impl RadialBlock {
    pub fn metric(&self, theta: f64) -> SquareMatrix {
        let s2 = theta.sin().powi(2);
        SquareMatrix::from_rows([
            [-self.a, 0.0, 0.0, 0.0],
            [0.0, -self.a * s2, 0.0, 0.0],
            [0.0, 0.0, self.g33, self.g34],
            [0.0, 0.0, self.g34, self.g44],
        ])
    }

    pub fn derivatives(&self, theta: f64) -> Vec<SquareMatrix> {
        let (s, c) = theta.sin_cos();
        let mut d1 = SquareMatrix::zeros(4);
        d1[(1, 1)] = -self.a * 2.0 * s * c;
        let d3 = SquareMatrix::from_rows([
            [-self.da, 0.0, 0.0, 0.0],
            [0.0, -self.da * s * s, 0.0, 0.0],
            [0.0, 0.0, self.dg33, self.dg34],
            [0.0, 0.0, self.dg34, self.dg44],
        ]);
        vec![d1, SquareMatrix::zeros(4), d3, SquareMatrix::zeros(4)]
    }
}

/// `√q` and `d√q/dr` from `q` and `dq/dr`.
///
/// A radicand that vanishes to rounding together with its derivative is the
/// identically-zero branch and yields `(0, 0)`.
pub(crate) fn sqrt_with_derivative(q: f64, dq: f64, scale: f64) -> Result<(f64, f64), String> {
    let zero_tol = 64.0 * f64::EPSILON * (1.0 + scale.abs());
    if q.abs() <= zero_tol {
        if dq.abs() <= 1e-10 * (1.0 + scale.abs()) {
            return Ok((0.0, 0.0));
        }
        return Err(format!("radicand vanishes ({q:e}) with non-zero slope"));
    }
    if q < 0.0 {
        return Err(format!("radicand negative ({q:e})"));
    }
    let s = q.sqrt();
    Ok((s, dq / (2.0 * s)))
}

fn angular_reason(x: &ColumnVector) -> Option<String> {
    if x[0].sin().abs() < MIN_SIN_THETA {
        Some(format!("sin x1 < {MIN_SIN_THETA:e} (polar axis)"))
    } else {
        None
    }
}

fn spherical_box(r_lo: f64, r_hi: f64) -> Vec<(f64, f64)> {
    vec![(0.3, PI - 0.3), (0.0, 2.0 * PI), (r_lo, r_hi), (-10.0, 10.0)]
}

/// Constant signature metric `G = diag(−1, …, −1, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct Minkowski {
    dim: usize,
}

impl Minkowski {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1);
        Self { dim }
    }

    pub fn signature(dim: usize) -> SquareMatrix {
        SquareMatrix::from_fn(dim, |i, j| if i != j { 0.0 } else if i + 1 == dim { 1.0 } else { -1.0 })
    }
}

impl Default for Minkowski {
    fn default() -> Self {
        Self::new(4)
    }
}

impl MetricField for Minkowski {
    fn name(&self) -> String {
        "minkowski".into()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn chart(&self) -> Chart {
        Chart::Rectilinear
    }
    fn components(&self, _x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        Ok(Self::signature(self.dim))
    }
    fn d_components(&self, _x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        Ok(Some(vec![SquareMatrix::zeros(self.dim); self.dim]))
    }
}

/// General static solution with `h = (1 − (c5/r)³)^{1/3}`.
///
/// With `w0 = r³ − c5³` the components are
/// `g11 = −w0^{2/3}`, `g33 = −h²`, `g34 = −h f`, `g44 = 1/h⁶ − f²`, where
/// `f = c8 √S / w0` and `S = c5³(2r³ − c5³) + (2c6/3) w0^{5/3} + c7 w0^{8/3}`.
/// Equivalently `g44 = 1 − 2c6/(3 r h) − c7 r² h²`.
#[derive(Debug, Clone)]
pub struct GeneralSpherical {
    pub params: SphericalSolutionParams,
    radii: (f64, f64),
}

impl GeneralSpherical {
    pub fn new(params: SphericalSolutionParams) -> Self {
        let lo = (1.2 * params.c5).max(params.c6.abs()) + 1.0;
        Self { params, radii: (lo, lo + 40.0) }
    }

    /// Radial range used by [`MetricField::sample_box`].
    pub fn with_sample_radii(mut self, lo: f64, hi: f64) -> Self {
        self.radii = (lo, hi);
        self
    }

    /// `h(r)`.
    pub fn h(&self, r: f64) -> f64 {
        (r.powi(3) - self.params.c5.powi(3)).cbrt() / r
    }

    /// Radicand `S(r)` of `f`.
    pub fn radicand(&self, r: f64) -> f64 {
        let SphericalSolutionParams { c5, c6, c7, .. } = self.params;
        let w0 = r.powi(3) - c5.powi(3);
        c5.powi(3) * (2.0 * r.powi(3) - c5.powi(3)) + (2.0 * c6 / 3.0) * w0.powf(5.0 / 3.0) + c7 * w0.powf(8.0 / 3.0)
    }

    /// `f(r) = c8 √S / w0`, defined through `g34 = −h f`.
    pub fn f(&self, r: f64) -> Result<f64, GeometryError> {
        Ok(self.block(r)?.g34 / -self.h(r))
    }

    /// `g44` in the closed form `1 − 2c6/(3 r h) − c7 r² h²`.
    pub fn g44_closed_form(&self, r: f64) -> f64 {
        let h = self.h(r);
        1.0 - 2.0 * self.params.c6 / (3.0 * r * h) - self.params.c7 * r * r * h * h
    }

    pub(crate) fn block(&self, r: f64) -> Result<RadialBlock, GeometryError> {
        let SphericalSolutionParams { c5, c6, c7, c8 } = self.params;
        let c53 = c5.powi(3);
        let w0 = r.powi(3) - c53;
        let dw0 = 3.0 * r * r;
        let cw = w0.cbrt();
        let h = cw / r;
        let dh = r / (cw * cw) - cw / (r * r);
        let s = self.radicand(r);
        let ds = 6.0 * c53 * r * r + (10.0 / 3.0) * c6 * r * r * cw * cw + 8.0 * c7 * r * r * w0 * cw * cw;
        let scale = c53 * r.powi(3) + (c6 * w0.powf(5.0 / 3.0)).abs() + (c7 * w0.powf(8.0 / 3.0)).abs();
        let (root, droot) = sqrt_with_derivative(s, ds, scale).map_err(|reason| self.locus(reason))?;
        let f = c8 * root / w0;
        let df = c8 * (droot / w0 - root * dw0 / (w0 * w0));
        let h6 = h.powi(6);
        Ok(RadialBlock {
            a: cw * cw,
            da: 2.0 * r * r / cw,
            g33: -h * h,
            dg33: -2.0 * h * dh,
            g34: -h * f,
            dg34: -(dh * f + h * df),
            g44: 1.0 / h6 - f * f,
            dg44: -6.0 * dh / (h6 * h) - 2.0 * f * df,
        })
    }

    fn locus(&self, reason: String) -> GeometryError {
        GeometryError::SingularLocus { metric: self.name(), reason }
    }
}

impl MetricField for GeneralSpherical {
    fn name(&self) -> String {
        "general-spherical".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Spherical
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        let r = x[2];
        if r <= 0.0 || r <= self.params.c5 * (1.0 + LOCUS_MARGIN) {
            return Some(format!("x3 = {r} <= c5 = {}", self.params.c5));
        }
        if let Some(reason) = angular_reason(x) {
            return Some(reason);
        }
        if self.radicand(r) < 0.0 {
            return Some(format!("radicand of f negative at x3 = {r}"));
        }
        None
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        Ok(self.block(x[2])?.metric(x[0]))
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        Ok(Some(self.block(x[2])?.derivatives(x[0])))
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        spherical_box(self.radii.0, self.radii.1)
    }
}

/// Weak solution (`c5 = 0`): `g34 = −c8 √(2r_M/r + c7 r²)`, `g44 = 1 − 2r_M/r − c7 r²`.
#[derive(Debug, Clone)]
pub struct WeakSpherical {
    pub r_m: f64,
    pub c7: f64,
    pub c8: f64,
    radii: (f64, f64),
}

impl WeakSpherical {
    pub fn new(r_m: f64, c7: f64, c8: f64) -> Result<Self, GeometryError> {
        if !(r_m >= 0.0) || !r_m.is_finite() {
            return Err(GeometryError::InvalidParameter(format!("r_M must be non-negative, got {r_m}")));
        }
        SphericalSolutionParams::weak(r_m, c7, c8)?;
        let lo = 0.5 + r_m;
        Ok(Self { r_m, c7, c8, radii: (lo, lo + 40.0 + 10.0 * r_m) })
    }

    pub fn with_sample_radii(mut self, lo: f64, hi: f64) -> Self {
        self.radii = (lo, hi);
        self
    }

    pub fn radicand(&self, r: f64) -> f64 {
        2.0 * self.r_m / r + self.c7 * r * r
    }

    pub(crate) fn block(&self, r: f64) -> Result<RadialBlock, GeometryError> {
        let q = self.radicand(r);
        let dq = -2.0 * self.r_m / (r * r) + 2.0 * self.c7 * r;
        let (root, droot) = sqrt_with_derivative(q, dq, 2.0 * self.r_m / r + (self.c7 * r * r).abs())
            .map_err(|reason| GeometryError::SingularLocus { metric: self.name(), reason })?;
        Ok(RadialBlock {
            a: r * r,
            da: 2.0 * r,
            g33: -1.0,
            dg33: 0.0,
            g34: -self.c8 * root,
            dg34: -self.c8 * droot,
            g44: 1.0 - 2.0 * self.r_m / r - self.c7 * r * r,
            dg44: 2.0 * self.r_m / (r * r) - 2.0 * self.c7 * r,
        })
    }
}

impl MetricField for WeakSpherical {
    fn name(&self) -> String {
        "weak".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Spherical
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        if x[2] <= 0.0 {
            return Some(format!("x3 = {} <= 0", x[2]));
        }
        if let Some(reason) = angular_reason(x) {
            return Some(reason);
        }
        if self.radicand(x[2]) < 0.0 {
            return Some(format!("radicand 2r_M/x3 + c7 x3^2 negative at x3 = {}", x[2]));
        }
        None
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        Ok(self.block(x[2])?.metric(x[0]))
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        Ok(Some(self.block(x[2])?.derivatives(x[0])))
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        spherical_box(self.radii.0, self.radii.1)
    }
}

/// A scalar function of the radius with optional closed-form derivative.
pub trait RadialFunction: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn derivative(&self, _r: f64) -> Option<f64> {
        None
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> RadialFunction for F {
    fn value(&self, r: f64) -> f64 {
        self(r)
    }
}

/// Choice of the free function `g33(r)` of the weak family.
#[derive(Clone)]
pub enum G33Profile {
    Constant(f64),
    /// `g33 = −1/g44`, which gives the diagonal metric for `ρ = 0`.
    InverseLapse,
    Custom(Arc<dyn RadialFunction>),
}

impl std::fmt::Debug for G33Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            G33Profile::Constant(c) => write!(f, "Constant({c})"),
            G33Profile::InverseLapse => write!(f, "InverseLapse"),
            G33Profile::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Weak family with an arbitrary `g33(r) < 0`:
/// `g34 = c8 √(1 + g33 g44)`, `g44 = 1 − 2r_M/r − (ρ/3) r²`,
/// so that `g33 g44 − g34² = −1`.
#[derive(Debug, Clone)]
pub struct GeneralWeak {
    pub g33: G33Profile,
    pub r_m: f64,
    pub rho: f64,
    pub c8: f64,
    radii: (f64, f64),
}

impl GeneralWeak {
    pub fn new(g33: G33Profile, r_m: f64, rho: f64, c8: f64) -> Result<Self, GeometryError> {
        SphericalSolutionParams::weak(r_m, rho / 3.0, c8)?;
        let lo = 2.0 * r_m.max(0.0) + 1.0;
        Ok(Self { g33, r_m, rho, c8, radii: (lo, lo + 40.0 + 10.0 * r_m) })
    }

    pub fn with_sample_radii(mut self, lo: f64, hi: f64) -> Self {
        self.radii = (lo, hi);
        self
    }

    fn lapse(&self, r: f64) -> (f64, f64) {
        (1.0 - 2.0 * self.r_m / r - self.rho / 3.0 * r * r, 2.0 * self.r_m / (r * r) - 2.0 * self.rho / 3.0 * r)
    }

    fn g33_profile(&self, r: f64) -> (f64, f64) {
        match &self.g33 {
            G33Profile::Constant(c) => (*c, 0.0),
            G33Profile::InverseLapse => {
                let (l, dl) = self.lapse(r);
                (-1.0 / l, dl / (l * l))
            }
            G33Profile::Custom(func) => {
                let d = func.derivative(r).unwrap_or_else(|| {
                    let h = 1e-5 * r.abs().max(1.0);
                    (-func.value(r + 2.0 * h) + 8.0 * func.value(r + h) - 8.0 * func.value(r - h)
                        + func.value(r - 2.0 * h))
                        / (12.0 * h)
                });
                (func.value(r), d)
            }
        }
    }

    pub(crate) fn block(&self, r: f64) -> Result<RadialBlock, GeometryError> {
        let (g44, dg44) = self.lapse(r);
        let (g33, dg33) = self.g33_profile(r);
        let q = 1.0 + g33 * g44;
        let dq = dg33 * g44 + g33 * dg44;
        let (root, droot) = sqrt_with_derivative(q, dq, (g33 * g44).abs())
            .map_err(|reason| GeometryError::SingularLocus { metric: self.name(), reason })?;
        Ok(RadialBlock {
            a: r * r,
            da: 2.0 * r,
            g33,
            dg33,
            g34: self.c8 * root,
            dg34: self.c8 * droot,
            g44,
            dg44,
        })
    }
}

impl MetricField for GeneralWeak {
    fn name(&self) -> String {
        "general-weak".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Spherical
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        let r = x[2];
        if r <= 0.0 {
            return Some(format!("x3 = {r} <= 0"));
        }
        if let Some(reason) = angular_reason(x) {
            return Some(reason);
        }
        let (g44, _) = self.lapse(r);
        if matches!(self.g33, G33Profile::InverseLapse) && g44.abs() < LOCUS_MARGIN {
            return Some(format!("g44 = 0 at x3 = {r}"));
        }
        let (g33, _) = self.g33_profile(r);
        if !(g33 < 0.0) {
            return Some(format!("g33 = {g33} is not negative at x3 = {r}"));
        }
        if 1.0 + g33 * g44 < -64.0 * f64::EPSILON * (1.0 + (g33 * g44).abs()) {
            return Some(format!("radicand 1 + g33 g44 negative at x3 = {r}"));
        }
        None
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        Ok(self.block(x[2])?.metric(x[0]))
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        Ok(Some(self.block(x[2])?.derivatives(x[0])))
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        spherical_box(self.radii.0, self.radii.1)
    }
}

/// Diagonal vacuum metric `diag(−r², −r² sin²ϑ, −1/(1 − 2r_M/r), 1 − 2r_M/r)`.
#[derive(Debug, Clone)]
pub struct Schwarzschild {
    pub r_m: f64,
    radii: (f64, f64),
}

impl Schwarzschild {
    pub fn new(r_m: f64) -> Result<Self, GeometryError> {
        if !(r_m > 0.0) || !r_m.is_finite() {
            return Err(GeometryError::InvalidParameter(format!("r_M must be positive, got {r_m}")));
        }
        Ok(Self { r_m, radii: (3.0 * r_m, 40.0 * r_m) })
    }

    pub fn with_sample_radii(mut self, lo: f64, hi: f64) -> Self {
        self.radii = (lo, hi);
        self
    }

    pub(crate) fn block(&self, r: f64) -> RadialBlock {
        let l = 1.0 - 2.0 * self.r_m / r;
        let dl = 2.0 * self.r_m / (r * r);
        RadialBlock { a: r * r, da: 2.0 * r, g33: -1.0 / l, dg33: dl / (l * l), g34: 0.0, dg34: 0.0, g44: l, dg44: dl }
    }
}

impl MetricField for Schwarzschild {
    fn name(&self) -> String {
        "schwarzschild".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Spherical
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        if x[2] <= 2.0 * self.r_m * (1.0 + LOCUS_MARGIN) {
            return Some(format!("x3 = {} at or inside the Schwarzschild radius 2r_M = {}", x[2], 2.0 * self.r_m));
        }
        angular_reason(x)
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        Ok(self.block(x[2]).metric(x[0]))
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        Ok(Some(self.block(x[2]).derivatives(x[0])))
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        spherical_box(self.radii.0, self.radii.1)
    }
}
