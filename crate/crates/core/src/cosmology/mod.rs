//! Conformally flat cosmology `g = f²(s)G`: velocity field, eigenvalues of
//! `g⁻¹R`, the field matrix, the continuity equation, the Big Bang density and
//! fitting it against a measured spectrum.

mod spectrum;

pub use spectrum::{load_spectrum, parse_spectrum, spectrum_compare, SpectrumFit, SpectrumSample, MIN_SPECTRUM_SAMPLES};

use crate::geometry::{ricci, GeometryError};
use crate::matcore::{ColumnVector, EigenSet, MatrixError, SquareMatrix};
use crate::metrics::{factor_d1, factor_d2, ConformalFactor, FriedmannLobachevsky, MaximallyUniform, MIN_INTERVAL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CosmoError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point is not timelike (s^2 = {s2:e})")]
    NotTimelike { s2: f64 },
    #[error("operation needs a bigbang model")]
    NotBigBang,
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("spectrum data: {0}")]
    Data(String),
}

/// Big Bang solution: `ρ = ρ_m·64q³/(1+q)⁶`, `q = (s/s_m)^{d/3}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BigBang {
    pub s_m: f64,
    pub rho_m: f64,
    pub d: f64,
}

impl BigBang {
    pub fn new(s_m: f64, rho_m: f64, d: f64) -> Result<Self, CosmoError> {
        for (name, v) in [("s_m", s_m), ("rho_m", rho_m), ("d", d)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CosmoError::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { s_m, rho_m, d })
    }

    /// Builds the model from the continuity constant: `ρ_m = d⁶/(216 c²)`.
    pub fn from_cont_const(s_m: f64, cont_const: f64, d: f64) -> Result<Self, CosmoError> {
        if !(cont_const > 0.0) {
            return Err(CosmoError::InvalidParameter(format!("cont_const must be positive, got {cont_const}")));
        }
        Self::new(s_m, d.powi(6) / (216.0 * cont_const * cont_const), d)
    }

    /// Constant `c` of `ρ = c/(s f)³`: `d³/(6^{3/2}√ρ_m)`.
    pub fn cont_const(&self) -> f64 {
        self.d.powi(3) / (6f64.powf(1.5) * self.rho_m.sqrt())
    }

    fn q(&self, s: f64) -> f64 {
        (s / self.s_m).powf(self.d / 3.0)
    }

    fn k(&self) -> f64 {
        self.d / (4.0 * (6.0 * self.rho_m).sqrt())
    }

    pub fn density(&self, s: f64) -> f64 {
        let q = self.q(s);
        64.0 * self.rho_m * q.powi(3) / (1.0 + q).powi(6)
    }

    /// `dρ/ds = 64ρ_m d q³(1 − q)/(s(1+q)⁷)`; positive below `s_m`, negative above.
    pub fn density_derivative(&self, s: f64) -> f64 {
        let q = self.q(s);
        64.0 * self.rho_m * self.d * q.powi(3) * (1.0 - q) / (s * (1.0 + q).powi(7))
    }

    /// The `d²(1+q)⁴/(96 s² ρ_m q²)` prefactor of `G`, written out independently of `f`.
    pub fn metric_prefactor(&self, s: f64) -> f64 {
        let q = self.q(s);
        self.d * self.d * (1.0 + q).powi(4) / (96.0 * s * s * self.rho_m * q * q)
    }
}

impl ConformalFactor for BigBang {
    fn f(&self, s: f64) -> f64 {
        let q = self.q(s);
        self.k() * (1.0 / q + 2.0 + q) / s
    }
    fn df(&self, s: f64) -> Option<f64> {
        let (q, e) = (self.q(s), self.d / 3.0);
        let b = e * (q - 1.0 / q) - (1.0 / q + 2.0 + q);
        Some(self.k() * b / (s * s))
    }
    fn d2f(&self, s: f64) -> Option<f64> {
        let (q, e) = (self.q(s), self.d / 3.0);
        let b = e * (q - 1.0 / q) - (1.0 / q + 2.0 + q);
        let db = e * (e * (q + 1.0 / q) - (q - 1.0 / q));
        Some(self.k() * (db - 2.0 * b) / (s * s * s))
    }
    fn label(&self) -> String {
        format!("bigbang(s_m={},rho_m={},d={})", self.s_m, self.rho_m, self.d)
    }
}

/// The two solutions of the metric equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CosmoModel {
    /// All eigenvalues equal: `f = 1/(1 − ρs²/12)`.
    MaximallyUniform { rho: f64 },
    /// `u` is the `μ₄` eigenvector.
    BigBang(BigBang),
}

impl CosmoModel {
    pub fn maximally_uniform(rho: f64) -> Result<Self, CosmoError> {
        if !rho.is_finite() {
            return Err(CosmoError::InvalidParameter(format!("rho must be finite, got {rho}")));
        }
        Ok(Self::MaximallyUniform { rho })
    }

    pub fn bigbang(s_m: f64, rho_m: f64, d: f64) -> Result<Self, CosmoError> {
        Ok(Self::BigBang(BigBang::new(s_m, rho_m, d)?))
    }

    /// Continuity constant of the bigbang kind.
    pub fn cont_const(&self) -> Option<f64> {
        match self {
            Self::BigBang(b) => Some(b.cont_const()),
            Self::MaximallyUniform { .. } => None,
        }
    }

    /// `f(s)`; the maximally uniform kind requires `1 − ρs²/12 > 0`.
    pub fn f(&self, s: f64) -> Result<f64, CosmoError> {
        check_interval(s)?;
        match self {
            Self::BigBang(b) => Ok(b.f(s)),
            Self::MaximallyUniform { rho } => {
                let m = MaximallyUniform::from_density(*rho);
                if s >= m.horizon() {
                    return Err(CosmoError::InvalidParameter(format!("1 - rho s^2/12 <= 0 at s = {s}")));
                }
                Ok(m.f(s))
            }
        }
    }

    /// `ρ(s)`: the constant density or the Big Bang profile.
    pub fn density(&self, s: f64) -> Result<f64, CosmoError> {
        check_interval(s)?;
        Ok(match self {
            Self::BigBang(b) => b.density(s),
            Self::MaximallyUniform { rho } => *rho,
        })
    }
}

fn check_interval(s: f64) -> Result<(), CosmoError> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(CosmoError::InvalidParameter(format!("s must be positive, got {s}")));
    }
    Ok(())
}

fn bigbang_of(model: &CosmoModel) -> Result<&BigBang, CosmoError> {
    match model {
        CosmoModel::BigBang(b) => Ok(b),
        CosmoModel::MaximallyUniform { .. } => Err(CosmoError::NotBigBang),
    }
}

pub fn bigbang_density(model: &CosmoModel, s: f64) -> Result<f64, CosmoError> {
    check_interval(s)?;
    Ok(bigbang_of(model)?.density(s))
}

/// `f = d(1+q)²/(4s√(6ρ_m) q)`.
pub fn bigbang_f(model: &CosmoModel, s: f64) -> Result<f64, CosmoError> {
    check_interval(s)?;
    Ok(bigbang_of(model)?.f(s))
}

/// `s = √(x̃Gx)` for timelike `x`.
pub fn interval(x: &ColumnVector) -> Result<f64, CosmoError> {
    if x.dim() != 4 {
        return Err(CosmoError::InvalidParameter(format!("expected a 4-vector, got dimension {}", x.dim())));
    }
    let s2 = FriedmannLobachevsky::<crate::metrics::UnitFactor>::interval_squared(x);
    if !(s2 > MIN_INTERVAL * MIN_INTERVAL) {
        return Err(CosmoError::NotTimelike { s2 });
    }
    Ok(s2.sqrt())
}

/// Comoving point `x = (β s, s)/√(1 − β²)`, so `x_λ = a_λ s` with `a₄ = 1/√(1 − β²)`.
pub fn comoving_point(beta: [f64; 3], s: f64) -> Result<ColumnVector, CosmoError> {
    check_interval(s)?;
    let b2: f64 = beta.iter().map(|b| b * b).sum();
    if !(b2 < 1.0) {
        return Err(CosmoError::InvalidParameter(format!("beta^2 = {b2} must be below 1")));
    }
    let a4 = 1.0 / (1.0 - b2).sqrt();
    Ok(ColumnVector::from([beta[0] * a4 * s, beta[1] * a4 * s, beta[2] * a4 * s, a4 * s]))
}

/// `u = x/(s f(s))`.
pub fn fl_velocity<F: ConformalFactor + ?Sized>(x: &ColumnVector, factor: &F) -> Result<ColumnVector, CosmoError> {
    let s = interval(x)?;
    let f = factor.f(s);
    if !(f > 0.0) || !f.is_finite() {
        return Err(CosmoError::InvalidParameter(format!("f({s}) = {f} is not positive")));
    }
    Ok(x.scale(1.0 / (s * f)))
}

/// The triple eigenvalue `μ₁` and the single eigenvalue `μ₄` of `g⁻¹R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlEigenvalues {
    pub mu1: f64,
    pub mu4: f64,
}

/// Closed-form `μ₁ = (sf′² + 5ff′ + sff″)/(sf⁴)` and
/// `μ₄ = 3(−sf′² + f(f′ + sf″))/(sf⁴)`; derivatives fall back to differences.
pub fn fl_eigenvalues<F: ConformalFactor + ?Sized>(factor: &F, s: f64) -> Result<FlEigenvalues, CosmoError> {
    check_interval(s)?;
    let f = factor.f(s);
    if !(f > 0.0) || !f.is_finite() {
        return Err(CosmoError::InvalidParameter(format!("f({s}) = {f} is not positive")));
    }
    let (d1, d2) = (factor_d1(factor, s), factor_d2(factor, s));
    let den = s * f.powi(4);
    Ok(FlEigenvalues {
        mu1: (s * d1 * d1 + 5.0 * f * d1 + s * f * d2) / den,
        mu4: 3.0 * (-s * d1 * d1 + f * (d1 + s * d2)) / den,
    })
}

/// `(μ₄ − μ₁) g u ũ g + μ₁ g` at `x`.
pub fn fl_ricci_closed_form<F: ConformalFactor + ?Sized>(factor: &F, x: &ColumnVector) -> Result<SquareMatrix, CosmoError> {
    let s = interval(x)?;
    let mu = fl_eigenvalues(factor, s)?;
    let (g, gu) = metric_and_lowered_velocity(factor, x)?;
    Ok(&SquareMatrix::outer(&gu, &gu).scale(mu.mu4 - mu.mu1) + &g.scale(mu.mu1))
}

/// Eigenvalues of `g⁻¹R` from the numeric curvature engine.
pub fn fl_eigenvalues_numeric<F: ConformalFactor + Clone>(factor: &F, x: &ColumnVector) -> Result<EigenSet, CosmoError> {
    interval(x)?;
    Ok(ricci(&FriedmannLobachevsky::new(factor.clone()), x)?.eigen)
}

fn metric_and_lowered_velocity<F: ConformalFactor + ?Sized>(
    factor: &F,
    x: &ColumnVector,
) -> Result<(SquareMatrix, ColumnVector), CosmoError> {
    let s = interval(x)?;
    let f = factor.f(s);
    let g = SquareMatrix::from_diag(&[-f * f, -f * f, -f * f, f * f]);
    let u = fl_velocity(x, factor)?;
    let gu = g.mat_vec(&u)?;
    Ok((g, gu))
}

/// `h = (f + s f′)/(s f²)`.
pub fn field_scalar<F: ConformalFactor + ?Sized>(factor: &F, s: f64) -> Result<f64, CosmoError> {
    check_interval(s)?;
    let f = factor.f(s);
    Ok((f + s * factor_d1(factor, s)) / (s * f * f))
}

/// Covariant field matrix `P̲ = h(g − g u ũ g)`.
pub fn field_matrix_p<F: ConformalFactor + ?Sized>(factor: &F, x: &ColumnVector) -> Result<SquareMatrix, CosmoError> {
    let s = interval(x)?;
    let h = field_scalar(factor, s)?;
    let (g, gu) = metric_and_lowered_velocity(factor, x)?;
    Ok((&g - &SquareMatrix::outer(&gu, &gu)).scale(h))
}

/// A density profile `ρ(s)` with an optional closed-form derivative.
pub trait DensityProfile {
    fn rho(&self, s: f64) -> f64;

    fn drho(&self, _s: f64) -> Option<f64> {
        None
    }
}

impl<T: Fn(f64) -> f64> DensityProfile for T {
    fn rho(&self, s: f64) -> f64 {
        self(s)
    }
}

impl DensityProfile for BigBang {
    fn rho(&self, s: f64) -> f64 {
        self.density(s)
    }
    fn drho(&self, s: f64) -> Option<f64> {
        Some(self.density_derivative(s))
    }
}

/// `ρ′(s)`, closed form or 5-point differences.
pub fn density_d1<R: DensityProfile + ?Sized>(rho: &R, s: f64) -> f64 {
    rho.drho(s).unwrap_or_else(|| {
        let h = 1e-4 * s.abs().max(1e-3);
        (-rho.rho(s + 2.0 * h) + 8.0 * rho.rho(s + h) - 8.0 * rho.rho(s - h) + rho.rho(s - 2.0 * h)) / (12.0 * h)
    })
}

/// Divergence of `ρU`: `(3ρf′ + f(3ρ/s + ρ′))/f²`.
pub fn continuity_residual<F, R>(factor: &F, rho: &R, s: f64) -> Result<f64, CosmoError>
where
    F: ConformalFactor + ?Sized,
    R: DensityProfile + ?Sized,
{
    check_interval(s)?;
    let f = factor.f(s);
    let r = rho.rho(s);
    Ok((3.0 * r * factor_d1(factor, s) + f * (3.0 * r / s + density_d1(rho, s))) / (f * f))
}

/// 100 points log-spaced over `[s_m/50, 50 s_m]`.
pub fn standard_log_grid(s_m: f64) -> Vec<f64> {
    log_grid(s_m / 50.0, 50.0 * s_m, 100)
}

/// `n` log-spaced points over `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
        }
    }
}

/// Curvature constant `k = tr(g⁻¹R)/12` of the maximally uniform solution.
pub fn curvature_constant(rho: f64) -> f64 {
    rho / 3.0
}
