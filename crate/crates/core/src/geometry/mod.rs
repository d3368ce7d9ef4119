//! Curvature engine.
//!
//! Everything is computed from a [`MetricField`]: Christoffel matrices of both
//! kinds (`γ^c`, `σ^m`), the two-index Riemann matrices `σ^{ab}` and their
//! lowered form `γ^{ab}`, and the Ricci matrix. Matrix conventions:
//!
//! * `(γ^c)_{ab} = ½(∂_c g_ab + ∂_b g_ac − ∂_a g_bc)`, `σ^c = g⁻¹γ^c`, so
//!   `(σ^m)_{μβ} = Γ^μ_{mβ}`.
//! * `σ^{ab} = ∂_aσ^b − ∂_bσ^a + σ^aσ^b − σ^bσ^a`, entry `(m,k)` is `R^m_{kab}`.
//! * `R_{mn} = Σ_β (σ^{mβ})_{βn}`. With this contraction the field equation
//!   reads `R = ρg` with `ρ > 0` for positive cosmological density.

mod curvature;
mod fd;
mod identities;
mod sampling;

pub use curvature::{
    christoffel, christoffel_with, eigen_split, ricci, ricci_direct, ricci_with, riemann, riemann_with,
    verify_field_equation, verify_field_equation_with, ChristoffelSet, CurvatureBundle, EigenSplit, FieldCheck,
    RiemannSet,
};
pub use fd::{fd_step, five_point};
pub use identities::{identity_suite, identity_suite_with, IdentityCheck, IdentityReport};
pub use sampling::sample_regular_points;

use crate::matcore::{ColumnVector, MatrixError, SquareMatrix};
use std::fmt;

/// Coordinate chart a metric is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    /// `(ϑ, φ, r, ct)`.
    Spherical,
    /// Cartesian-like `(x₁, x₂, x₃, x₄)`.
    Rectilinear,
    /// Conformally flat `f²(s)G` over Cartesian coordinates.
    Conformal,
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chart::Spherical => "spherical",
            Chart::Rectilinear => "rectilinear",
            Chart::Conformal => "conformal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("point has dimension {got}, metric expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{metric}: point on singular locus ({reason})")]
    SingularLocus { metric: String, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("Ricci matrix asymmetric beyond tolerance: {violation:e} > {tol:e} at {point}")]
    RicciAsymmetry { violation: f64, tol: f64, point: String },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A metric model `x ↦ g(x)`.
///
/// Implementors must be pure: the curvature engine evaluates them at many
/// shifted points, possibly from several threads.
pub trait MetricField: Send + Sync {
    fn name(&self) -> String;

    fn dim(&self) -> usize;

    fn chart(&self) -> Chart;

    /// Why `x` lies in the exclusion zone, or `None` for a regular point.
    fn singular_reason(&self, _x: &ColumnVector) -> Option<String> {
        None
    }

    /// `g(x)`; called only after the point passed [`MetricField::singular_reason`].
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError>;

    /// Closed-form `∂_c g` for `c = 0..dim`, if the model has one.
    fn d_components(&self, _x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        Ok(None)
    }

    /// Box `[lo, hi]` per coordinate used by random sampling.
    fn sample_box(&self) -> Vec<(f64, f64)> {
        vec![(-1.0, 1.0); self.dim()]
    }

    /// Extra acceptance test for sampled points (e.g. a radial shell).
    fn sample_filter(&self, _x: &ColumnVector) -> bool {
        true
    }

    /// Length over which `g` varies along `axis` near `x`; difference steps
    /// are a relative fraction of it.
    fn step_scale(&self, x: &ColumnVector, axis: usize) -> f64 {
        x[axis].abs().max(1.0)
    }
}

impl<M: MetricField + ?Sized> MetricField for Box<M> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn chart(&self) -> Chart {
        (**self).chart()
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        (**self).singular_reason(x)
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        (**self).components(x)
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        (**self).d_components(x)
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        (**self).sample_box()
    }
    fn sample_filter(&self, x: &ColumnVector) -> bool {
        (**self).sample_filter(x)
    }
    fn step_scale(&self, x: &ColumnVector, axis: usize) -> f64 {
        (**self).step_scale(x, axis)
    }
}

/// Checks that `x` is a regular point of `field`.
pub fn check_point<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<(), GeometryError> {
    if x.dim() != field.dim() {
        return Err(GeometryError::DimensionMismatch { expected: field.dim(), got: x.dim() });
    }
    if !x.is_finite() {
        return Err(GeometryError::SingularLocus { metric: field.name(), reason: "non-finite coordinate".into() });
    }
    if let Some(reason) = field.singular_reason(x) {
        return Err(GeometryError::SingularLocus { metric: field.name(), reason });
    }
    Ok(())
}

/// `g(x)` with the regular-point check applied.
pub fn eval<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
    check_point(field, x)?;
    field.components(x)
}

/// How first derivatives of the metric are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    /// Closed form when the metric supplies one, finite differences otherwise.
    Auto,
    /// Always 5-point central differences of `g`.
    FiniteDifference,
}

/// Step sizes and tolerances of the curvature engine.
#[derive(Debug, Clone, Copy)]
pub struct EngineOptions {
    pub derivative: DerivativeMode,
    /// Relative step for first derivatives of `g`.
    pub metric_step: f64,
    /// Relative step for derivatives of the `σ^m` field.
    pub sigma_step: f64,
    /// Relative step for derivatives of curvature.
    pub curvature_step: f64,
    /// Allowed `max|R − Rᵀ| / (1 + max|R|)` before symmetrizing.
    pub ricci_symmetry_tol: f64,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            derivative: DerivativeMode::Auto,
            metric_step: 1e-5,
            sigma_step: 1e-4,
            curvature_step: 1e-3,
            ricci_symmetry_tol: 1e-6,
        }
    }
}

impl EngineOptions {
    /// Coarser steps for the identity suite. Its differential checks take a
    /// third derivative through two nested difference stencils, where roundoff
    /// rather than truncation dominates at the default steps.
    pub fn identities() -> Self {
        Self { sigma_step: 3e-4, curvature_step: 3e-3, ..Self::default() }
    }
}

/// `∂_c g` for every axis, analytic or by finite differences per `mode`.
pub fn metric_derivatives<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    opts: &EngineOptions,
) -> Result<Vec<SquareMatrix>, GeometryError> {
    check_point(field, x)?;
    if opts.derivative == DerivativeMode::Auto {
        if let Some(d) = field.d_components(x)? {
            return Ok(d);
        }
    }
    (0..field.dim())
        .map(|c| {
            let h = opts.metric_step * field.step_scale(x, c);
            let samples = fd::stencil(x, c, h, |p| eval(field, p))?;
            Ok(five_point(&samples, h))
        })
        .collect()
}
