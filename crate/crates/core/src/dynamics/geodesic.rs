//! The coordinate equation of motion `du/dτ = −σ^μ u_μ u + g⁻¹P_a u`.

use crate::geometry::{christoffel, eval, MetricField};
use crate::matcore::{ColumnVector, SquareMatrix};

use super::ode::{rkf45, Crossing, Event, OdeOptions, Termination};
use super::DynamicsError;

/// Largest `|P + Pᵀ|` accepted for the antisymmetric forcing matrix.
pub const FORCE_ANTISYMMETRY_TOL: f64 = 1e-12;

/// Largest `|ũgu − 1|` accepted for an initial state.
pub const INITIAL_NORMALIZATION_TOL: f64 = 1e-8;

/// Point, contravariant 4-velocity `u = dx/dτ` and proper time.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicState {
    pub x: ColumnVector,
    pub u: ColumnVector,
    pub tau: f64,
}

impl GeodesicState {
    pub fn new(x: ColumnVector, u: ColumnVector, tau: f64) -> Self {
        Self { x, u, tau }
    }

    /// `ũ g(x) u`.
    pub fn normalization<M: MetricField + ?Sized>(&self, field: &M) -> Result<f64, DynamicsError> {
        Ok(eval(field, &self.x)?.bilinear(&self.u, &self.u))
    }

    fn to_vec(&self) -> Vec<f64> {
        self.x.as_slice().iter().chain(self.u.as_slice()).copied().collect()
    }

    fn from_slice(tau: f64, y: &[f64]) -> Self {
        let n = y.len() / 2;
        Self { x: ColumnVector::from(y[..n].to_vec()), u: ColumnVector::from(y[n..].to_vec()), tau }
    }
}

/// `du/dτ`. Without `p_a` this is the geodesic equation.
pub fn geodesic_rhs<M: MetricField + ?Sized>(
    field: &M,
    state: &GeodesicState,
    p_a: Option<&SquareMatrix>,
) -> Result<ColumnVector, DynamicsError> {
    let n = field.dim();
    if state.x.dim() != n || state.u.dim() != n {
        return Err(DynamicsError::DimensionMismatch { expected: n, got: state.u.dim() });
    }
    let chr = christoffel(field, &state.x)?;
    let mut acc = ColumnVector::zeros(n);
    for mu in 0..n {
        if state.u[mu] != 0.0 {
            acc = &acc - &chr.second_kind[mu].mat_vec(&state.u)?.scale(state.u[mu]);
        }
    }
    if let Some(p) = p_a {
        if p.dim() != n {
            return Err(DynamicsError::DimensionMismatch { expected: n, got: p.dim() });
        }
        let asym = (p + &p.transpose()).max_abs();
        if asym > FORCE_ANTISYMMETRY_TOL {
            return Err(DynamicsError::NotAntisymmetric { violation: asym });
        }
        acc = &acc + &chr.inverse_metric.mat_vec(&p.mat_vec(&state.u)?)?;
    }
    Ok(acc)
}

/// Extra controls for [`integrate_geodesic_with`].
#[derive(Debug, Clone, Default)]
pub struct GeodesicOptions {
    pub ode: OdeOptions,
    /// Antisymmetric forcing `P_a`, constant along the path.
    pub force: Option<SquareMatrix>,
    /// Stop when velocity component `u[axis]` crosses zero in this direction.
    pub stop_on_velocity_zero: Option<(usize, Crossing)>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<GeodesicState>,
    /// `max |ũgu − 1|` over accepted states.
    pub max_normalization_drift: f64,
    pub termination: Termination,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn last(&self) -> &GeodesicState {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Set when integration stopped before `tau_end` for a reason other than an event.
    pub fn truncation_reason(&self) -> Option<String> {
        match &self.termination {
            Termination::Completed | Termination::Event => None,
            other => Some(other.to_string()),
        }
    }
}

/// Adaptive RKF45 with relative tolerance `tol` (absolute `tol·1e-2`).
pub fn integrate_geodesic<M: MetricField + ?Sized>(
    field: &M,
    state0: &GeodesicState,
    tau_end: f64,
    tol: f64,
) -> Result<Trajectory, DynamicsError> {
    let opts = GeodesicOptions { ode: OdeOptions { rtol: tol, atol: tol * 1e-2, ..OdeOptions::default() }, ..Default::default() };
    integrate_geodesic_with(field, state0, tau_end, &opts)
}

pub fn integrate_geodesic_with<M: MetricField + ?Sized>(
    field: &M,
    state0: &GeodesicState,
    tau_end: f64,
    opts: &GeodesicOptions,
) -> Result<Trajectory, DynamicsError> {
    let n0 = state0.normalization(field)?;
    if (n0 - 1.0).abs() > INITIAL_NORMALIZATION_TOL {
        return Err(DynamicsError::NotNormalized { value: n0 });
    }
    let rhs = |tau: f64, y: &[f64]| -> Result<Vec<f64>, DynamicsError> {
        let s = GeodesicState::from_slice(tau, y);
        let du = geodesic_rhs(field, &s, opts.force.as_ref())?;
        Ok(s.u.as_slice().iter().chain(du.as_slice()).copied().collect())
    };
    let n = field.dim();
    let g_event = opts.stop_on_velocity_zero.map(|(axis, _)| move |_t: f64, y: &[f64]| y[n + axis]);
    let event = match (&g_event, opts.stop_on_velocity_zero) {
        (Some(g), Some((_, crossing))) => Some(Event { g, crossing, t_tol: 1e-12 * tau_end.abs().max(1.0) }),
        _ => None,
    };
    let sol = rkf45(rhs, state0.tau, &state0.to_vec(), tau_end, &opts.ode, event.as_ref());
    let mut states = Vec::with_capacity(sol.t.len());
    let mut drift: f64 = 0.0;
    for (t, y) in sol.t.iter().zip(&sol.y) {
        let s = GeodesicState::from_slice(*t, y);
        drift = drift.max((s.normalization(field)? - 1.0).abs());
        states.push(s);
    }
    Ok(Trajectory {
        states,
        max_normalization_drift: drift,
        termination: sol.termination,
        accepted_steps: sol.accepted,
        rejected_steps: sol.rejected,
    })
}
