//! Pinned numerical tolerances shared by the library, its tests and the
//! acceptance target.
//!
//! Values are grouped by what they bound. Relative tolerances are dimensionless;
//! residual tolerances follow the normalization stated next to them.

// Linear algebra

/// `‖a·a⁻¹ − I‖∞` for well-conditioned inputs.
pub const INVERSE_ROUND_TRIP: f64 = 1e-10;

/// Residual of the proportional pencil `(ρg, g)`.
pub const PROPORTIONAL_PENCIL_RESIDUAL: f64 = 1e-9;

// Curvature engine

/// `‖R − ρg‖∞ / (1 + ‖R‖∞)` for exact solutions of the field equation.
pub const FIELD_EQUATION_RESIDUAL: f64 = 1e-6;

/// Each identity-suite check with analytic first derivatives.
pub const IDENTITY_SUITE: f64 = 1e-7;

/// Entrywise relative agreement of numeric and closed-form `σ^{ab}`.
pub const CLOSED_FORM_SIGMA_REL: f64 = 1e-6;

/// Largest `‖σ^{ab}‖∞` accepted as flat.
pub const FLAT_CURVATURE: f64 = 1e-8;

/// Orthogonality drift `‖ΩᵀΩ − I‖∞` of the integrated flat frame.
pub const FRAME_ORTHOGONALITY: f64 = 1e-10;

/// Relative agreement of analytic and finite-difference metric derivatives.
pub const DERIVATIVE_ORACLE_REL: f64 = 1e-6;

// Orbits

/// Relative error accepted as agreement to four significant figures.
pub const FOUR_SIG_FIGS: f64 = 5e-4;

/// Per-century precession against the tabulated formula column.
pub const PER_CENTURY_REL: f64 = 1e-2;

/// Extreme transverse velocities against the tabulated formula column.
pub const VELOCITY_REL: f64 = 1e-3;

/// `|ũgu − 1|` along an integrated geodesic.
pub const GEODESIC_NORMALIZATION: f64 = 1e-9;

/// Numerically integrated precession against the closed form.
pub const PRECESSION_NUMERIC_REL: f64 = 1e-2;

/// Turning-point velocity `u₃(p)`, `u₃(a)`.
pub const TURNING_POINT: f64 = 1e-12;

// Radial motion

/// Schwarzschild extremum speed against `2/(3√3)`.
pub const RADIAL_EXTREMUM: f64 = 1e-12;

/// Rest-at-infinity profile against `−√(2r_M/y₃)`.
pub const RADIAL_PROFILE: f64 = 1e-10;

// Cosmology

/// Continuity residual of the solved density/factor pair.
pub const CONTINUITY_RESIDUAL: f64 = 1e-9;

/// Closed-form eigenvalue `μ₄` against the density.
pub const COSMO_EIGENVALUE: f64 = 1e-7;

/// Peak normalization `ρ(s_m) = ρ_m`.
pub const PEAK_NORMALIZATION: f64 = 1e-12;

// Units

/// Solar mass as a length against 1.47 km.
pub const SOLAR_RADIUS_REL: f64 = 5e-3;

/// Electric/gravitational force ratio against 1.23587e36.
pub const FORCE_RATIO_REL: f64 = 1e-4;

/// Charge radius over atomic radius against 2.9e-8.
pub const CHARGE_ATOM_RATIO_REL: f64 = 2e-2;
