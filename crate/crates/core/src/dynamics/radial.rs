//! Purely radial motion in the Schwarzschild metric and in the weak metric.

use super::DynamicsError;

fn check_radius(y3: f64, r_m: f64) -> Result<f64, DynamicsError> {
    if !(y3 > 2.0 * r_m) || !(r_m > 0.0) {
        return Err(DynamicsError::InvalidParameter(format!("need y3 > 2 r_M > 0, got y3={y3}, r_M={r_m}")));
    }
    Ok(2.0 * r_m / y3)
}

/// Energy constant `c₄` of radial Schwarzschild motion with speed `β₃₀` at `y₃₀`;
/// `y₃₀ = ∞` gives `1/√(1 − β₃₀²)`.
pub fn schwarzschild_energy(y30: f64, beta30: f64, r_m: f64) -> Result<f64, DynamicsError> {
    let z0 = if y30.is_infinite() { 0.0 } else { check_radius(y30, r_m)? };
    let l = 1.0 - z0;
    let q = l * l - beta30 * beta30;
    if !(q > 0.0) {
        return Err(DynamicsError::ForbiddenRegion { quantity: "(1 - 2r_M/y30)^2 - beta30^2", value: q });
    }
    Ok(l * (l / q).sqrt())
}

/// `|β₃| = (y₃ − 2r_M)/(c₄y₃) · √(c₄² − 1 + 2r_M/y₃)`.
pub fn radial_velocity_schwarzschild(y3: f64, c4: f64, r_m: f64) -> Result<f64, DynamicsError> {
    let z = check_radius(y3, r_m)?;
    let q = c4 * c4 - 1.0 + z;
    if q < 0.0 {
        return Err(DynamicsError::ForbiddenRegion { quantity: "c4^2 - 1 + 2r_M/y3", value: q });
    }
    Ok((1.0 - z) / c4 * q.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialExtremum {
    pub y3m: f64,
    pub beta3m: f64,
}

/// Radius and size of the extreme Schwarzschild radial speed:
/// `y₃m = 2r_M/(1 − 2c₄²/3)`, `|β₃m| = 2c₄²/(3√3)`. Requires `c₄² < 3/2`.
pub fn radial_extremum(c4: f64, r_m: f64) -> Result<RadialExtremum, DynamicsError> {
    let z = 1.0 - 2.0 * c4 * c4 / 3.0;
    if !(z > 0.0) || !(r_m > 0.0) {
        return Err(DynamicsError::InvalidParameter(format!("no interior extremum for c4={c4}, r_M={r_m}")));
    }
    Ok(RadialExtremum { y3m: 2.0 * r_m / z, beta3m: 2.0 * c4 * c4 / (3.0 * 3f64.sqrt()) })
}

/// Energy-like constant `α₄r` of radial motion in the weak metric with signed
/// speed `β₃₀` at `y₃₀`: `(1 − z₀ − β₃₀√z₀)/√(1 − z₀ − 2β₃₀√z₀ − β₃₀²)`, `z₀ = 2r_M/y₃₀`.
pub fn weak_energy(y30: f64, beta30: f64, r_m: f64) -> Result<f64, DynamicsError> {
    let z0 = if y30.is_infinite() { 0.0 } else { check_radius(y30, r_m)? };
    let sz = z0.sqrt();
    let q = 1.0 - z0 - 2.0 * beta30 * sz - beta30 * beta30;
    if !(q > 0.0) {
        return Err(DynamicsError::ForbiddenRegion { quantity: "alpha4r radicand", value: q });
    }
    Ok((1.0 - z0 - beta30 * sz) / q.sqrt())
}

/// Infalling radial speed in the weak metric,
/// `β₃r = (1 − z)√A / (√(zA) − α)` with `A = α² − 1 + z`, `z = 2r_M/y₃`.
///
/// Evaluated as `−√A(√(zA) + α)/(α² + z)`, which is the same quantity without
/// the cancellation at `y₃ → 2r_M`. `y30 = ∞` is allowed.
pub fn radial_velocity_weak(y3: f64, y30: f64, beta30: f64, r_m: f64) -> Result<f64, DynamicsError> {
    if y3 > y30 {
        return Err(DynamicsError::InvalidParameter(format!("infall needs y3 <= y30, got y3={y3}, y30={y30}")));
    }
    let z = if y3 == 2.0 * r_m && r_m > 0.0 { 1.0 } else { check_radius(y3, r_m)? };
    let alpha = weak_energy(y30, beta30, r_m)?;
    let big_a = alpha * alpha - 1.0 + z;
    if big_a < 0.0 {
        return Err(DynamicsError::ForbiddenRegion { quantity: "alpha4r^2 - 1 + 2r_M/y3", value: big_a });
    }
    Ok(-big_a.sqrt() * ((z * big_a).sqrt() + alpha) / (alpha * alpha + z))
}
