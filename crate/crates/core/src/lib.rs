//! Matrix formulation of curved-space field theory.
//!
//! * [`matcore`]: small dense linear algebra and the `(R, g)` eigensolver.
//! * [`geometry`]: Christoffel, Riemann and Ricci matrices from any metric.
//! * [`metrics`]: closed-form metric catalog, flat-frame construction, units.
//! * [`dynamics`]: geodesic integration, orbits, precession, radial motion.
//! * [`cosmology`]: conformally flat cosmological model and spectrum fitting.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cosmology;
pub mod dynamics;
pub mod geometry;
pub mod matcore;
pub mod metrics;
pub mod tolerances;
