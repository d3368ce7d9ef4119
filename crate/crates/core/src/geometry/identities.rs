//! Algebraic and differential identities of the curvature matrices, checked
//! on their coordinate components `R_{mkab}` and `R_{mn}`.
//!
//! Violations are reported relative to `1 + (magnitude of the terms)`, so a
//! check is meaningful both for tiny and for order-one curvature.

use super::curvature::{ricci_from_riemann, riemann_with, RiemannSet};
use super::fd::{five_point, stencil};
use super::{EngineOptions, GeometryError, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};

pub const DEFAULT_IDENTITY_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub point: ColumnVector,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn worst(&self) -> f64 {
        self.checks.iter().map(|c| c.max_violation).fold(0.0, f64::max)
    }
}

pub const CHECK_NAMES: [&str; 6] = [
    "antisymmetry R_mkab = -R_kmab",
    "cyclic R_rkmn + R_rmnk + R_rnkm = 0",
    "pair symmetry R_mkab = R_abmk",
    "Ricci symmetry R = R^T",
    "contracted Bianchi div R = grad(S)/2",
    "second Bianchi cyclic covariant derivative",
];

pub fn identity_suite<M: MetricField + ?Sized>(field: &M, x: &ColumnVector) -> Result<IdentityReport, GeometryError> {
    identity_suite_with(field, x, DEFAULT_IDENTITY_TOL, &EngineOptions::identities())
}

/// Lowered Riemann components `R_{mkab}` flattened as `((m·n + k)·n + a)·n + b`.
fn lowered(r: &RiemannSet) -> Vec<f64> {
    let n = r.sigma_ab.len();
    let mut out = Vec::with_capacity(n.pow(4));
    for m in 0..n {
        for k in 0..n {
            for a in 0..n {
                for bb in 0..n {
                    out.push(r.lower(m, k, a, bb));
                }
            }
        }
    }
    out
}

struct CurvatureSample {
    riemann: Vec<f64>,
    ricci: SquareMatrix,
    scalar: f64,
}

fn sample<M: MetricField + ?Sized>(field: &M, x: &ColumnVector, opts: &EngineOptions) -> Result<CurvatureSample, GeometryError> {
    let relaxed = EngineOptions { ricci_symmetry_tol: f64::INFINITY, ..*opts };
    let r = riemann_with(field, x, &relaxed)?;
    let parts = ricci_from_riemann(&r, &relaxed)?;
    Ok(CurvatureSample { riemann: lowered(&r), ricci: parts.ricci, scalar: parts.scalar })
}

pub fn identity_suite_with<M: MetricField + ?Sized>(
    field: &M,
    x: &ColumnVector,
    tol: f64,
    opts: &EngineOptions,
) -> Result<IdentityReport, GeometryError> {
    let n = field.dim();
    let relaxed = EngineOptions { ricci_symmetry_tol: f64::INFINITY, ..*opts };
    let here_riemann = riemann_with(field, x, &relaxed)?;
    let here = ricci_from_riemann(&here_riemann, &relaxed)?;
    let r4 = lowered(&here_riemann);
    let idx = |m: usize, k: usize, a: usize, b: usize| ((m * n + k) * n + a) * n + b;
    let r_scale = 1.0 + r4.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let mut p1: f64 = 0.0;
    let mut p2: f64 = 0.0;
    let mut p3: f64 = 0.0;
    for m in 0..n {
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    p1 = p1.max((r4[idx(m, k, a, b)] + r4[idx(k, m, a, b)]).abs());
                    p2 = p2.max((r4[idx(m, k, a, b)] + r4[idx(m, a, b, k)] + r4[idx(m, b, k, a)]).abs());
                    p3 = p3.max((r4[idx(m, k, a, b)] - r4[idx(a, b, m, k)]).abs());
                }
            }
        }
    }
    let p5 = here.asymmetry / (1.0 + here.ricci.max_abs());

    // Outer derivatives of R_mkab, R_mn and S along every axis.
    let mut d_riemann = Vec::with_capacity(n);
    let mut d_ricci = Vec::with_capacity(n);
    let mut d_scalar = Vec::with_capacity(n);
    for e in 0..n {
        let h = opts.curvature_step * field.step_scale(x, e);
        let s = stencil(x, e, h, |p| sample(field, p, opts))?;
        d_riemann.push(five_point(&[s[0].riemann.clone(), s[1].riemann.clone(), s[2].riemann.clone(), s[3].riemann.clone()], h));
        d_ricci.push(five_point(&[s[0].ricci.clone(), s[1].ricci.clone(), s[2].ricci.clone(), s[3].ricci.clone()], h));
        d_scalar.push(five_point(&[s[0].scalar, s[1].scalar, s[2].scalar, s[3].scalar], h));
    }

    let chr = &here_riemann.christoffel;
    let gam = |s: usize, a: usize, b: usize| chr.gamma(s, a, b);
    let ric = &here.ricci;

    // Contracted Bianchi: g^{λμ} ∇_λ R_{μn} − ½ ∂_n S
    let mut p6: f64 = 0.0;
    let mut p6_scale: f64 = 0.0;
    for nn in 0..n {
        let mut div = 0.0;
        for l in 0..n {
            for mu in 0..n {
                let mut cov = d_ricci[l][(mu, nn)];
                for s in 0..n {
                    cov -= gam(s, l, mu) * ric[(s, nn)] + gam(s, l, nn) * ric[(mu, s)];
                }
                div += chr.inverse_metric[(l, mu)] * cov;
            }
        }
        let half_grad = 0.5 * d_scalar[nn];
        p6 = p6.max((div - half_grad).abs());
        p6_scale = p6_scale.max(div.abs()).max(half_grad.abs());
    }

    // Second Bianchi: ∇_e R_mkab + ∇_a R_mkbe + ∇_b R_mkea = 0
    let cov = |e: usize, m: usize, k: usize, a: usize, b: usize| {
        let mut v = d_riemann[e][idx(m, k, a, b)];
        for s in 0..n {
            v -= gam(s, e, m) * r4[idx(s, k, a, b)]
                + gam(s, e, k) * r4[idx(m, s, a, b)]
                + gam(s, e, a) * r4[idx(m, k, s, b)]
                + gam(s, e, b) * r4[idx(m, k, a, s)];
        }
        v
    };
    let mut p7: f64 = 0.0;
    let mut p7_scale: f64 = 0.0;
    for m in 0..n {
        for k in 0..n {
            for e in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let terms = [cov(e, m, k, a, b), cov(a, m, k, b, e), cov(b, m, k, e, a)];
                        p7 = p7.max(terms.iter().sum::<f64>().abs());
                        p7_scale = terms.iter().fold(p7_scale, |acc, t| acc.max(t.abs()));
                    }
                }
            }
        }
    }

    let violations = [
        p1 / r_scale,
        p2 / r_scale,
        p3 / r_scale,
        p5,
        p6 / (1.0 + p6_scale),
        p7 / (1.0 + p7_scale),
    ];
    let checks = CHECK_NAMES
        .iter()
        .zip(violations)
        .map(|(&name, v)| IdentityCheck { name, max_violation: v, tolerance: tol, passed: v.is_finite() && v < tol })
        .collect();
    Ok(IdentityReport { point: x.clone(), checks })
}
