//! Spherically symmetric solution in rectilinear coordinates `(x₁, x₂, x₃, ct)`.

use crate::geometry::{Chart, GeometryError, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};

use super::spherical::{sqrt_with_derivative, SphericalSolutionParams, LOCUS_MARGIN};

/// `g_ii = −w(r)`, `g_i4 = f(r) x_i`, `g44 = 1/w³ − r² f²/w` with
/// `w = (r³ − c5³)^{2/3}/r²` and
/// `f = r⁻² √( c5³(2r³ − c5³)/w0^{4/3} + w0^{1/3}(2c6 + r³c7) )`, `w0 = r³ − c5³`.
///
/// In this chart `c6` plays the role of `r_M` (for `c5 = 0`,
/// `g44 = 1 − 2c6/r − c7 r²`).
#[derive(Debug, Clone)]
pub struct RectilinearSpherical {
    pub params: SphericalSolutionParams,
    extent: f64,
}

#[derive(Debug, Clone, Copy)]
struct Profile {
    w: f64,
    dw: f64,
    f: f64,
    df: f64,
}

impl RectilinearSpherical {
    pub fn new(params: SphericalSolutionParams) -> Self {
        let extent = 3.0 * params.c5.max(params.c6.abs()).max(1.0) + 8.0;
        Self { params, extent }
    }

    /// Half-width of the sampling cube in `x₁..x₃`.
    pub fn with_sample_extent(mut self, extent: f64) -> Self {
        self.extent = extent;
        self
    }

    pub fn radius(x: &ColumnVector) -> f64 {
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    fn radicand(&self, r: f64) -> f64 {
        let SphericalSolutionParams { c5, c6, c7, .. } = self.params;
        let w0 = r.powi(3) - c5.powi(3);
        c5.powi(3) * (2.0 * r.powi(3) - c5.powi(3)) / w0.powf(4.0 / 3.0) + w0.cbrt() * (2.0 * c6 + r.powi(3) * c7)
    }

    /// `g44` in the closed form `1 − (2c6 + r³c7)/(r³ − c5³)^{1/3}`.
    pub fn g44_closed_form(&self, r: f64) -> f64 {
        let SphericalSolutionParams { c5, c6, c7, .. } = self.params;
        1.0 - (2.0 * c6 + r.powi(3) * c7) / (r.powi(3) - c5.powi(3)).cbrt()
    }

    fn profile(&self, r: f64) -> Result<Profile, GeometryError> {
        let SphericalSolutionParams { c5, c6, c7, c8 } = self.params;
        let c53 = c5.powi(3);
        let r2 = r * r;
        let r3 = r2 * r;
        let w0 = r3 - c53;
        let cw = w0.cbrt();
        let w = cw * cw / r2;
        let dw = 2.0 / cw - 2.0 * cw * cw / r3;
        let t = self.radicand(r);
        let dt = c53 * (6.0 * r2 / w0.powf(4.0 / 3.0) - 4.0 * r2 * (2.0 * r3 - c53) / w0.powf(7.0 / 3.0))
            + r2 * (2.0 * c6 + r3 * c7) / (cw * cw)
            + 3.0 * r2 * c7 * cw;
        let scale = (c53 * r3 / w0.powf(4.0 / 3.0)).abs() + (cw * (2.0 * c6 + r3 * c7)).abs();
        let (root, droot) = sqrt_with_derivative(t, dt, scale)
            .map_err(|reason| GeometryError::SingularLocus { metric: self.name(), reason })?;
        Ok(Profile { w, dw, f: c8 * root / r2, df: c8 * (droot / r2 - 2.0 * root / r3) })
    }
}

impl MetricField for RectilinearSpherical {
    fn name(&self) -> String {
        "rectilinear".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Rectilinear
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        let r = Self::radius(x);
        if r <= 0.0 || r <= self.params.c5 * (1.0 + LOCUS_MARGIN) {
            return Some(format!("r = {r} <= c5 = {}", self.params.c5));
        }
        if self.radicand(r) < 0.0 {
            return Some(format!("radicand of f negative at r = {r}"));
        }
        None
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        let r = Self::radius(x);
        let Profile { w, f, .. } = self.profile(r)?;
        let mut g = SquareMatrix::zeros(4);
        for i in 0..3 {
            g[(i, i)] = -w;
            g[(i, 3)] = f * x[i];
            g[(3, i)] = f * x[i];
        }
        g[(3, 3)] = 1.0 / w.powi(3) - r * r * f * f / w;
        Ok(g)
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        let r = Self::radius(x);
        let Profile { w, dw, f, df } = self.profile(r)?;
        let dg44_dr = -3.0 * dw / w.powi(4) - (2.0 * r * f * f + 2.0 * r * r * f * df) / w + r * r * f * f * dw / (w * w);
        let mut out = Vec::with_capacity(4);
        for c in 0..3 {
            let dr = x[c] / r;
            let mut d = SquareMatrix::zeros(4);
            for i in 0..3 {
                d[(i, i)] = -dw * dr;
                let v = df * dr * x[i] + if i == c { f } else { 0.0 };
                d[(i, 3)] = v;
                d[(3, i)] = v;
            }
            d[(3, 3)] = dg44_dr * dr;
            out.push(d);
        }
        out.push(SquareMatrix::zeros(4));
        Ok(Some(out))
    }
    fn sample_filter(&self, x: &ColumnVector) -> bool {
        let r = Self::radius(x);
        r >= 1.5 * self.params.c5 + 1.0 && r <= self.extent
    }
    fn sample_box(&self) -> Vec<(f64, f64)> {
        let e = self.extent;
        vec![(-e, e), (-e, e), (-e, e), (-10.0, 10.0)]
    }
}
