//! Geodesic integration, plane orbits, perihelion precession, radial motion
//! and the planetary tables.

mod geodesic;
pub mod ode;
mod orbit;
mod planets;
mod radial;

pub use geodesic::{
    geodesic_rhs, integrate_geodesic, integrate_geodesic_with, GeodesicOptions, GeodesicState, Trajectory,
    FORCE_ANTISYMMETRY_TOL, INITIAL_NORMALIZATION_TOL,
};
pub use orbit::{
    extreme_velocities, four_velocity_general, four_velocity_weak, general_orbit_rhs, orbit_constants,
    plane_orbit_velocity, precession, precession_numeric, weak_orbit_rhs, ExtremeVelocities, MotionConstants,
    OrbitGeometry, OrbitSpec, ARCSEC_PER_RADIAN, VELOCITY_NORMALIZATION_TOL,
};
pub use planets::{bundled_planets, load_planets, parse_planets, planet_table, PlanetRecord, PlanetRow, DAYS_PER_CENTURY};
pub use radial::{
    weak_energy, radial_extremum, radial_velocity_weak, radial_velocity_schwarzschild, schwarzschild_energy,
    RadialExtremum,
};

use crate::geometry::GeometryError;
use crate::matcore::MatrixError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("forbidden region: {quantity} = {value:e} is negative")]
    ForbiddenRegion { quantity: &'static str, value: f64 },
    #[error("forcing matrix is not antisymmetric (|P + P^T| = {violation:e})")]
    NotAntisymmetric { violation: f64 },
    #[error("state is not normalized: u^T g u = {value}")]
    NotNormalized { value: f64 },
    #[error("invalid orbit: {0}")]
    InvalidOrbit(String),
    #[error("circular orbit (a = p): precession is undefined")]
    CircularOrbit,
    #[error("no perihelion found within 4 pi")]
    NoPerihelion,
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("planet data: {0}")]
    Data(String),
}
