//! Metric catalog, flat-frame construction and physical units.

mod conformal;
mod curvature_forms;
mod flat_frame;
mod rectilinear;
mod spherical;
pub mod units;

pub use conformal::{
    factor_d1, factor_d2, ConformalFactor, FnFactor, FriedmannLobachevsky, MaximallyUniform, UnitFactor, MIN_INTERVAL,
};
pub use curvature_forms::{
    sigma_ab_closed_form, w_form_erratum, w_forms_from_metric, w_forms_printed, ErratumEntry, ErratumReport, WForms,
};
pub use flat_frame::{
    orthogonality_drift, AntisymmetricFn, FlatFrameMetric, FlatFrameSpec, OmegaTable, FRAME_TOL, OMEGA_STEP,
    REORTHONORMALIZE_EVERY, SAMPLE_MIN_FRAME_DET,
};
pub use rectilinear::RectilinearSpherical;
pub use spherical::{
    G33Profile, GeneralSpherical, GeneralWeak, Minkowski, RadialFunction, Schwarzschild, SphericalSolutionParams,
    WeakSpherical, LOCUS_MARGIN, MIN_SIN_THETA,
};
pub use units::PhysicalConstants;

use crate::geometry::GeometryError;

pub fn general_spherical(params: SphericalSolutionParams) -> GeneralSpherical {
    GeneralSpherical::new(params)
}

pub fn weak_spherical(r_m: f64, c7: f64, c8: f64) -> Result<WeakSpherical, GeometryError> {
    WeakSpherical::new(r_m, c7, c8)
}

pub fn general_weak(g33: G33Profile, r_m: f64, rho: f64, c8: f64) -> Result<GeneralWeak, GeometryError> {
    GeneralWeak::new(g33, r_m, rho, c8)
}

pub fn schwarzschild(r_m: f64) -> Result<Schwarzschild, GeometryError> {
    Schwarzschild::new(r_m)
}

pub fn rectilinear_spherical(params: SphericalSolutionParams) -> RectilinearSpherical {
    RectilinearSpherical::new(params)
}

pub fn friedmann_lobachevsky<F: ConformalFactor>(factor: F) -> FriedmannLobachevsky<F> {
    FriedmannLobachevsky::new(factor)
}

pub fn flat_frame_metric(spec: FlatFrameSpec) -> FlatFrameMetric {
    FlatFrameMetric::new(spec)
}
