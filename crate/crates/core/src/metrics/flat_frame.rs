//! Flat metrics built from a frame `e₀ = I + F(x_k)(I − I(k)) x ĩ(k)`.
//!
//! `I(k) = i(k)ĩ(k)` is the projector on axis `k`, so `(I − I(k))x = x_⊥` is
//! `x` with its `k`-th component removed. With `F` antisymmetric and
//! `Ω′ = ΩF`, the map `Q(x) = ∫₀^{x_k} Ω i(k) dt + Ω(x_k) x_⊥` satisfies
//! `dQ = Ω e₀ dx`, hence `g = ẽ₀e₀` is flat.

use std::fmt;
use std::sync::Arc;

use crate::geometry::{Chart, GeometryError, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};

/// Tolerance on `F + Fᵀ = 0` and `Ω₀ᵀΩ₀ = I`.
pub const FRAME_TOL: f64 = 1e-12;
/// RK4 step in `x_k`.
pub const OMEGA_STEP: f64 = 1e-3;
/// Gram–Schmidt cadence in steps.
pub const REORTHONORMALIZE_EVERY: usize = 100;

/// Antisymmetric matrix function of one variable.
#[derive(Clone)]
pub enum AntisymmetricFn {
    Constant(SquareMatrix),
    /// `A + tB`.
    Linear(SquareMatrix, SquareMatrix),
    /// `A cos ωt + B sin ωt`.
    Trig { a: SquareMatrix, b: SquareMatrix, omega: f64 },
    Custom(Arc<dyn Fn(f64) -> SquareMatrix + Send + Sync>),
}

impl fmt::Debug for AntisymmetricFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(a) => write!(f, "Constant({a:?})"),
            Self::Linear(a, b) => write!(f, "Linear({a:?}, {b:?})"),
            Self::Trig { omega, .. } => write!(f, "Trig(omega = {omega})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl AntisymmetricFn {
    pub fn dim(&self) -> usize {
        self.value(0.0).dim()
    }

    pub fn value(&self, t: f64) -> SquareMatrix {
        match self {
            Self::Constant(a) => a.clone(),
            Self::Linear(a, b) => a + &b.scale(t),
            Self::Trig { a, b, omega } => &a.scale((omega * t).cos()) + &b.scale((omega * t).sin()),
            Self::Custom(f) => f(t),
        }
    }

    pub fn derivative(&self, t: f64) -> SquareMatrix {
        match self {
            Self::Constant(a) => SquareMatrix::zeros(a.dim()),
            Self::Linear(_, b) => b.clone(),
            Self::Trig { a, b, omega } => &a.scale(-omega * (omega * t).sin()) + &b.scale(omega * (omega * t).cos()),
            Self::Custom(f) => {
                let h = 1e-4 * t.abs().max(1.0);
                let s = [f(t + 2.0 * h), f(t + h), f(t - h), f(t - 2.0 * h)];
                crate::geometry::five_point(&s, h)
            }
        }
    }

    fn antisymmetry_violation(&self) -> f64 {
        let check = |m: &SquareMatrix| (m + &m.transpose()).max_abs();
        match self {
            Self::Constant(a) => check(a),
            Self::Linear(a, b) | Self::Trig { a, b, .. } => check(a).max(check(b)),
            Self::Custom(f) => [-1.0, 0.0, 0.5, 1.0].iter().map(|&t| check(&f(t))).fold(0.0, f64::max),
        }
    }
}

/// Distinguished axis, generator `F` and initial rotation `Ω₀`.
#[derive(Debug, Clone)]
pub struct FlatFrameSpec {
    pub k: usize,
    pub f_a: AntisymmetricFn,
    pub omega0: SquareMatrix,
}

impl FlatFrameSpec {
    pub fn new(k: usize, f_a: AntisymmetricFn, omega0: SquareMatrix) -> Result<Self, GeometryError> {
        let n = f_a.dim();
        if omega0.dim() != n {
            return Err(GeometryError::InvalidParameter(format!("omega0 is {}x{0}, F is {n}x{n}", omega0.dim())));
        }
        if k >= n {
            return Err(GeometryError::InvalidParameter(format!("axis {k} out of range for dimension {n}")));
        }
        let v = f_a.antisymmetry_violation();
        if v > FRAME_TOL {
            return Err(GeometryError::InvalidParameter(format!("F_a is not antisymmetric (|F + F^T| = {v:e})")));
        }
        let drift = orthogonality_drift(&omega0);
        if drift > FRAME_TOL {
            return Err(GeometryError::InvalidParameter(format!("omega0 is not orthogonal (drift {drift:e})")));
        }
        Ok(Self { k, f_a, omega0 })
    }

    pub fn dim(&self) -> usize {
        self.omega0.dim()
    }
}

/// `max|ΩᵀΩ − I|`.
pub fn orthogonality_drift(omega: &SquareMatrix) -> f64 {
    (&(&omega.transpose() * omega) - &SquareMatrix::identity(omega.dim())).max_abs()
}

/// `g = ẽ₀e₀` of a flat frame.
#[derive(Debug, Clone)]
pub struct FlatFrameMetric {
    pub spec: FlatFrameSpec,
}

/// Minimum `|det e₀|` of a regular point.
pub const MIN_FRAME_DET: f64 = 1e-6;
/// Minimum `|det e₀|` of a sampled point; curvature near the degenerate locus
/// is a cancellation of terms of size `1/det²`.
pub const SAMPLE_MIN_FRAME_DET: f64 = 0.5;

impl FlatFrameMetric {
    pub fn new(spec: FlatFrameSpec) -> Self {
        Self { spec }
    }

    fn perp(&self, x: &ColumnVector) -> ColumnVector {
        x.with(self.spec.k, 0.0)
    }

    /// Frame `e₀(x)`.
    pub fn frame(&self, x: &ColumnVector) -> SquareMatrix {
        let k = self.spec.k;
        let v = &self.spec.f_a.value(x[k]) * &self.perp(x);
        let mut e = SquareMatrix::identity(self.spec.dim());
        for i in 0..e.dim() {
            e[(i, k)] += v[i];
        }
        e
    }

    fn frame_derivatives(&self, x: &ColumnVector) -> Vec<SquareMatrix> {
        let k = self.spec.k;
        let n = self.spec.dim();
        let f = self.spec.f_a.value(x[k]);
        (0..n)
            .map(|c| {
                let dv = if c == k { &self.spec.f_a.derivative(x[k]) * &self.perp(x) } else { f.column(c) };
                let mut d = SquareMatrix::zeros(n);
                for i in 0..n {
                    d[(i, k)] = dv[i];
                }
                d
            })
            .collect()
    }
}

impl MetricField for FlatFrameMetric {
    fn name(&self) -> String {
        format!("flat-frame[k={}]", self.spec.k + 1)
    }
    fn dim(&self) -> usize {
        self.spec.dim()
    }
    fn chart(&self) -> Chart {
        Chart::Rectilinear
    }
    fn singular_reason(&self, x: &ColumnVector) -> Option<String> {
        let d = self.frame(x).det();
        if d.abs() < MIN_FRAME_DET {
            Some(format!("frame e0 degenerate (det = {d:e})"))
        } else {
            None
        }
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        let e = self.frame(x);
        Ok(&e.transpose() * &e)
    }
    fn sample_filter(&self, x: &ColumnVector) -> bool {
        self.frame(x).det().abs() >= SAMPLE_MIN_FRAME_DET
    }
    /// `det e₀ = 1 + (F(x_k)x_⊥)_k`; steps stay a fraction of `|det e₀|/|∂_c det e₀|`.
    fn step_scale(&self, x: &ColumnVector, axis: usize) -> f64 {
        let k = self.spec.k;
        let det = 1.0 + (&self.spec.f_a.value(x[k]) * &self.perp(x))[k];
        let d_det = if axis == k {
            (&self.spec.f_a.derivative(x[k]) * &self.perp(x))[k]
        } else {
            self.spec.f_a.value(x[k])[(k, axis)]
        };
        let coord = x[axis].abs().max(1.0);
        if d_det == 0.0 {
            coord
        } else {
            coord.min(det.abs() / d_det.abs())
        }
    }
    fn d_components(&self, x: &ColumnVector) -> Result<Option<Vec<SquareMatrix>>, GeometryError> {
        let e = self.frame(x);
        let et = e.transpose();
        Ok(Some(
            self.frame_derivatives(x)
                .iter()
                .map(|de| &(&de.transpose() * &e) + &(&et * de))
                .collect(),
        ))
    }
}

/// `Ω(t)` and `M(t) = ∫₀ᵗ Ω i(k) dt` tabulated on a uniform grid.
///
/// Built once and immutable afterwards, so it can be shared between threads.
#[derive(Debug, Clone)]
pub struct OmegaTable {
    spec: FlatFrameSpec,
    step: f64,
    /// Nodes at `t = j·step`, `j = 0..`, for `t ≥ 0`.
    forward: Vec<(SquareMatrix, ColumnVector)>,
    /// Nodes at `t = −j·step`.
    backward: Vec<(SquareMatrix, ColumnVector)>,
    max_drift: f64,
}

fn gram_schmidt(m: &SquareMatrix) -> SquareMatrix {
    let n = m.dim();
    let mut cols: Vec<ColumnVector> = (0..n).map(|j| m.column(j)).collect();
    for j in 0..n {
        for i in 0..j {
            let p = cols[i].dot(&cols[j]);
            cols[j] = &cols[j] - &cols[i].scale(p);
        }
        let norm = cols[j].norm();
        cols[j] = cols[j].scale(1.0 / norm);
    }
    SquareMatrix::from_fn(n, |i, j| cols[j][i])
}

impl OmegaTable {
    /// Integrates `Ω′ = ΩF`, `M′ = Ω i(k)` over `[t_min, t_max]` (containing 0).
    pub fn build(spec: &FlatFrameSpec, t_min: f64, t_max: f64) -> Self {
        let mut table = Self {
            spec: spec.clone(),
            step: OMEGA_STEP,
            forward: Vec::new(),
            backward: Vec::new(),
            max_drift: orthogonality_drift(&spec.omega0),
        };
        let start = (spec.omega0.clone(), ColumnVector::zeros(spec.dim()));
        for (dir, bound) in [(1.0, t_max.max(0.0)), (-1.0, (-t_min).max(0.0))] {
            let steps = (bound / OMEGA_STEP).ceil() as usize + 1;
            let mut nodes = vec![start.clone()];
            let mut state = start.clone();
            for j in 0..steps {
                let t = dir * j as f64 * OMEGA_STEP;
                state = table.rk4(&state, t, dir * OMEGA_STEP);
                table.max_drift = table.max_drift.max(orthogonality_drift(&state.0));
                if (j + 1) % REORTHONORMALIZE_EVERY == 0 {
                    state.0 = gram_schmidt(&state.0);
                }
                nodes.push(state.clone());
            }
            if dir > 0.0 {
                table.forward = nodes;
            } else {
                table.backward = nodes;
            }
        }
        table
    }

    fn rhs(&self, omega: &SquareMatrix, t: f64) -> (SquareMatrix, ColumnVector) {
        (omega * &self.spec.f_a.value(t), omega.column(self.spec.k))
    }

    fn rk4(&self, (om, m): &(SquareMatrix, ColumnVector), t: f64, h: f64) -> (SquareMatrix, ColumnVector) {
        let (k1o, k1m) = self.rhs(om, t);
        let o2 = om + &k1o.scale(h / 2.0);
        let (k2o, k2m) = self.rhs(&o2, t + h / 2.0);
        let o3 = om + &k2o.scale(h / 2.0);
        let (k3o, k3m) = self.rhs(&o3, t + h / 2.0);
        let o4 = om + &k3o.scale(h);
        let (k4o, k4m) = self.rhs(&o4, t + h);
        let dom = &(&k1o + &k2o.scale(2.0)) + &(&k3o.scale(2.0) + &k4o);
        let dm = &(&k1m + &k2m.scale(2.0)) + &(&k3m.scale(2.0) + &k4m);
        (om + &dom.scale(h / 6.0), m + &dm.scale(h / 6.0))
    }

    /// Largest `max|ΩᵀΩ − I|` seen along the integration.
    pub fn max_drift(&self) -> f64 {
        self.max_drift
    }

    /// `(Ω(t), M(t))`; `None` outside the tabulated range.
    pub fn at(&self, t: f64) -> Option<(SquareMatrix, ColumnVector)> {
        let (nodes, dir) = if t >= 0.0 { (&self.forward, 1.0) } else { (&self.backward, -1.0) };
        let j = (t.abs() / self.step).floor() as usize;
        let node = nodes.get(j)?;
        let t0 = dir * j as f64 * self.step;
        let rest = t - t0;
        if rest == 0.0 {
            return Some(node.clone());
        }
        Some(self.rk4(node, t0, rest))
    }

    /// Rotation `Ω(t)`.
    pub fn omega(&self, t: f64) -> Option<SquareMatrix> {
        self.at(t).map(|(o, _)| o)
    }

    /// Flat coordinates `Q(x) = M(x_k) + Ω(x_k) x_⊥`.
    pub fn q_flat(&self, x: &ColumnVector) -> Option<ColumnVector> {
        let k = self.spec.k;
        let (omega, m) = self.at(x[k])?;
        Some(&m + &(&omega * &x.with(k, 0.0)))
    }
}

fn random_antisymmetric(n: usize, rng: &mut impl rand::Rng) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-1.0..1.0);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

impl FlatFrameSpec {
    /// Seeded frame with `F = A cos ωt + B sin ωt`, random axis and random `Ω₀`.
    pub fn random(n: usize, seed: u64) -> Result<Self, GeometryError> {
        use rand::{Rng, SeedableRng};
        if n < 2 {
            return Err(GeometryError::InvalidParameter(format!("flat frame needs dimension >= 2, got {n}")));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(0..n);
        let a = random_antisymmetric(n, &mut rng);
        let b = random_antisymmetric(n, &mut rng);
        let omega = rng.gen_range(0.5..2.0);
        let omega0 = gram_schmidt(&SquareMatrix::from_fn(n, |i, j| {
            if i == j {
                1.0 + rng.gen_range(0.0..1.0)
            } else {
                rng.gen_range(-0.5..0.5)
            }
        }));
        Self::new(k, AntisymmetricFn::Trig { a, b, omega }, omega0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{eval, riemann, sample_regular_points};

    #[test]
    fn random_specs_are_flat() {
        for seed in 0..6 {
            let spec = FlatFrameSpec::random(4, seed).unwrap();
            let m = FlatFrameMetric::new(spec);
            for x in sample_regular_points(&m, 4, seed).unwrap() {
                assert!(riemann(&m, &x).unwrap().max_sigma_norm() < 1e-8);
            }
        }
    }

    #[test]
    fn q_flat_pulls_back_the_identity() {
        let spec = FlatFrameSpec::random(3, 11).unwrap();
        let table = OmegaTable::build(&spec, -2.0, 2.0);
        assert!(table.max_drift() < 1e-10);
        let m = FlatFrameMetric::new(spec);
        let x = ColumnVector::from([0.3, -0.4, 0.2]);
        let h = 1e-5;
        let jac = SquareMatrix::from_fn(3, |i, j| {
            let (p, q) = (x.with(j, x[j] + h), x.with(j, x[j] - h));
            (table.q_flat(&p).unwrap()[i] - table.q_flat(&q).unwrap()[i]) / (2.0 * h)
        });
        let g = eval(&m, &x).unwrap();
        assert!((&(&jac.transpose() * &jac) - &g).max_abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_specs() {
        let not_anti = SquareMatrix::from_rows([[0.0, 1.0], [1.0, 0.0]]);
        assert!(FlatFrameSpec::new(0, AntisymmetricFn::Constant(not_anti), SquareMatrix::identity(2)).is_err());
        let f = AntisymmetricFn::Constant(SquareMatrix::zeros(2));
        assert!(FlatFrameSpec::new(2, f.clone(), SquareMatrix::identity(2)).is_err());
        assert!(FlatFrameSpec::new(0, f, SquareMatrix::from_diag(&[2.0, 1.0])).is_err());
        assert!(FlatFrameSpec::random(1, 0).is_err());
    }
}
