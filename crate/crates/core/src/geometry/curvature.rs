use super::fd::{five_point, stencil};
use super::{check_point, eval, metric_derivatives, EngineOptions, GeometryError, MetricField};
use crate::matcore::{generalized_eigenvalues, ColumnVector, EigenSet, SquareMatrix};

/// Christoffel matrices at a point.
#[derive(Debug, Clone)]
pub struct ChristoffelSet {
    pub point: ColumnVector,
    pub metric: SquareMatrix,
    pub inverse_metric: SquareMatrix,
    /// `γ^c`, entry `(a,b)` is `Γ_{a,cb}`.
    pub first_kind: Vec<SquareMatrix>,
    /// `σ^m = g⁻¹γ^m`, entry `(μ,β)` is `Γ^μ_{mβ}`.
    pub second_kind: Vec<SquareMatrix>,
}

impl ChristoffelSet {
    /// `Γ^s_{ab}`.
    #[inline]
    pub fn gamma(&self, s: usize, a: usize, b: usize) -> f64 {
        self.second_kind[a][(s, b)]
    }
}

/// Two-index Riemann matrices at a point.
#[derive(Debug, Clone)]
pub struct RiemannSet {
    pub christoffel: ChristoffelSet,
    /// `σ^{ab}`, entry `(m,k)` is `R^m_{kab}`.
    pub sigma_ab: Vec<Vec<SquareMatrix>>,
    /// `γ^{ab} = gσ^{ab}`, entry `(m,k)` is `R_{mkab}`.
    pub gamma_ab: Vec<Vec<SquareMatrix>>,
}

impl RiemannSet {
    /// `R_{mkab}`.
    #[inline]
    pub fn lower(&self, m: usize, k: usize, a: usize, b: usize) -> f64 {
        self.gamma_ab[a][b][(m, k)]
    }

    /// `max_{a,b} ‖σ^{ab}‖∞`.
    pub fn max_sigma_norm(&self) -> f64 {
        self.sigma_ab.iter().flatten().map(SquareMatrix::norm_inf).fold(0.0, f64::max)
    }
}

/// Complete curvature data at a point.
#[derive(Debug, Clone)]
pub struct CurvatureBundle {
    pub riemann: RiemannSet,
    /// Symmetrized Ricci matrix.
    pub ricci: SquareMatrix,
    /// `max|R − Rᵀ|` before symmetrization.
    pub ricci_asymmetry: f64,
    /// `tr(g⁻¹R)`.
    pub scalar: f64,
    pub eigen: EigenSet,
}

impl CurvatureBundle {
    pub fn point(&self) -> &ColumnVector {
        &self.riemann.christoffel.point
    }

    pub fn metric(&self) -> &SquareMatrix {
        &self.riemann.christoffel.metric
    }
}

pub fn christoffel<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<ChristoffelSet, GeometryError> {
    christoffel_with(field, x, &EngineOptions::default())
}

pub fn christoffel_with<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    opts: &EngineOptions,
) -> Result<ChristoffelSet, GeometryError> {
    let g = eval(field, x)?;
    let dg = metric_derivatives(field, x, opts)?;
    let g_inv = g.inverse()?;
    let n = g.dim();
    let first_kind: Vec<SquareMatrix> = (0..n)
        .map(|c| SquareMatrix::from_fn(n, |a, b| 0.5 * (dg[c][(a, b)] + dg[b][(a, c)] - dg[a][(b, c)])))
        .collect();
    let second_kind = first_kind.iter().map(|gc| &g_inv * gc).collect();
    Ok(ChristoffelSet { point: x.clone(), metric: g, inverse_metric: g_inv, first_kind, second_kind })
}

pub fn riemann<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<RiemannSet, GeometryError> {
    riemann_with(field, x, &EngineOptions::default())
}

/// `∂_a σ^b` for all `a, b` by differencing the `σ` field.
fn sigma_derivatives<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    opts: &EngineOptions,
) -> Result<Vec<Vec<SquareMatrix>>, GeometryError> {
    (0..field.dim())
        .map(|a| {
            let h = opts.sigma_step * field.step_scale(x, a);
            let samples = stencil(x, a, h, |p| christoffel_with(field, p, opts).map(|c| c.second_kind))?;
            Ok(five_point(&samples, h))
        })
        .collect()
}

pub fn riemann_with<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    opts: &EngineOptions,
) -> Result<RiemannSet, GeometryError> {
    let chr = christoffel_with(field, x, opts)?;
    let d_sigma = sigma_derivatives(field, x, opts)?;
    let n = field.dim();
    let sigma = &chr.second_kind;
    let mut sigma_ab = vec![vec![SquareMatrix::zeros(n); n]; n];
    for a in 0..n {
        for b in a + 1..n {
            let s = &(&(&d_sigma[a][b] - &d_sigma[b][a]) + &(&sigma[a] * &sigma[b])) - &(&sigma[b] * &sigma[a]);
            sigma_ab[b][a] = -&s;
            sigma_ab[a][b] = s;
        }
    }
    let gamma_ab = sigma_ab.iter().map(|row| row.iter().map(|s| &chr.metric * s).collect()).collect();
    Ok(RiemannSet { christoffel: chr, sigma_ab, gamma_ab })
}

pub fn ricci<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<CurvatureBundle, GeometryError> {
    ricci_with(field, x, &EngineOptions::default())
}

pub fn ricci_with<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    opts: &EngineOptions,
) -> Result<CurvatureBundle, GeometryError> {
    let riemann = riemann_with(field, x, opts)?;
    bundle_from_riemann(riemann, opts)
}

/// Contracted Ricci matrix and scalar without the eigen solve.
pub(crate) struct RicciParts {
    pub ricci: SquareMatrix,
    pub asymmetry: f64,
    pub scalar: f64,
}

pub(crate) fn ricci_from_riemann(riemann: &RiemannSet, opts: &EngineOptions) -> Result<RicciParts, GeometryError> {
    let n = riemann.sigma_ab.len();
    let raw = SquareMatrix::from_fn(n, |m, k| (0..n).map(|b| riemann.sigma_ab[m][b][(b, k)]).sum());
    let asymmetry = raw.asymmetry();
    let tol = opts.ricci_symmetry_tol * (1.0 + raw.max_abs());
    if asymmetry > tol {
        return Err(GeometryError::RicciAsymmetry {
            violation: asymmetry,
            tol,
            point: riemann.christoffel.point.to_string(),
        });
    }
    let ricci = raw.symmetrized();
    let scalar = (&riemann.christoffel.inverse_metric * &ricci).trace();
    Ok(RicciParts { ricci, asymmetry, scalar })
}

pub(crate) fn bundle_from_riemann(riemann: RiemannSet, opts: &EngineOptions) -> Result<CurvatureBundle, GeometryError> {
    let parts = ricci_from_riemann(&riemann, opts)?;
    let eigen = generalized_eigenvalues(&parts.ricci, &riemann.christoffel.metric.symmetrized())?;
    Ok(CurvatureBundle { riemann, ricci: parts.ricci, ricci_asymmetry: parts.asymmetry, scalar: parts.scalar, eigen })
}

/// Ricci matrix from Christoffel symbols in index form,
/// `R_mn = ∂_mΓ^β_{βn} − ∂_βΓ^β_{mn} + Γ^β_{mλ}Γ^λ_{βn} − Γ^β_{βλ}Γ^λ_{mn}`.
pub fn ricci_direct<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
    let opts = EngineOptions::default();
    let n = field.dim();
    let chr = christoffel_with(field, x, &opts)?;
    // d[c][s][a][b] = ∂_c Γ^s_{ab}
    let mut d = vec![vec![vec![vec![0.0; n]; n]; n]; n];
    for c in 0..n {
        let h = opts.sigma_step * field.step_scale(x, c);
        let samples = stencil(x, c, h, |p| {
            let k = christoffel_with(field, p, &opts)?;
            let mut flat = Vec::with_capacity(n * n * n);
            for s in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        flat.push(k.gamma(s, a, b));
                    }
                }
            }
            Ok::<_, GeometryError>(flat)
        })?;
        let flat = five_point(&samples, h);
        for s in 0..n {
            for a in 0..n {
                for b in 0..n {
                    d[c][s][a][b] = flat[(s * n + a) * n + b];
                }
            }
        }
    }
    let mut r = SquareMatrix::zeros(n);
    for m in 0..n {
        for nn in 0..n {
            let mut v = 0.0;
            for b in 0..n {
                v += d[m][b][b][nn] - d[b][b][m][nn];
                for l in 0..n {
                    v += chr.gamma(b, m, l) * chr.gamma(l, b, nn) - chr.gamma(b, b, l) * chr.gamma(l, m, nn);
                }
            }
            r[(m, nn)] = v;
        }
    }
    Ok(r)
}

/// Result of checking `R = ρg`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldCheck {
    /// `tr(g⁻¹R)/n`.
    pub rho: f64,
    /// `‖R − ρg‖∞ / (1 + ‖R‖∞)`.
    pub max_residual: f64,
}

pub fn verify_field_equation<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<FieldCheck, GeometryError> {
    verify_field_equation_with(field, x, &EngineOptions::default())
}

pub fn verify_field_equation_with<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    opts: &EngineOptions,
) -> Result<FieldCheck, GeometryError> {
    let b = ricci_with(field, x, opts)?;
    Ok(field_check(&b))
}

pub(crate) fn field_check(b: &CurvatureBundle) -> FieldCheck {
    let g = b.metric();
    let rho = b.scalar / g.dim() as f64;
    let diff = &b.ricci - &g.scale(rho);
    FieldCheck { rho, max_residual: diff.norm_inf() / (1.0 + b.ricci.norm_inf()) }
}

/// Eigenvalues of `(R, g)` and their pairwise gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSplit {
    pub mu: Vec<f64>,
    pub gaps: Vec<f64>,
}

impl EigenSplit {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().fold(0.0, |m, g| m.max(g.abs()))
    }
}

pub fn eigen_split<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<EigenSplit, GeometryError> {
    check_point(field, x)?;
    let b = ricci(field, x)?;
    Ok(EigenSplit { gaps: b.eigen.gaps(), mu: b.eigen.values })
}
