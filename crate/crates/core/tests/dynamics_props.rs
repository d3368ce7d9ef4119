use std::f64::consts::FRAC_PI_2;

use matfield::dynamics::{
    bundled_planets, extreme_velocities, four_velocity_general, four_velocity_weak, general_orbit_rhs, geodesic_rhs,
    integrate_geodesic, orbit_constants, plane_orbit_velocity, precession, precession_numeric, GeodesicState,
    MotionConstants, OrbitGeometry, OrbitSpec,
};
use matfield::geometry::eval;
use matfield::matcore::ColumnVector;
use matfield::metrics::units::mass_to_length;
use matfield::metrics::{GeneralSpherical, PhysicalConstants, Schwarzschild, SphericalSolutionParams, WeakSpherical};
use proptest::prelude::*;

fn sun_km() -> f64 {
    let c = PhysicalConstants::bundled();
    mass_to_length(c.m_sun, &c) / 1e3
}

fn planet_specs() -> Vec<(String, OrbitSpec)> {
    let r_m = sun_km();
    bundled_planets()
        .into_iter()
        .map(|p| (p.name.clone(), OrbitSpec::new(p.perihelion_km, p.aphelion_km, r_m).unwrap()))
        .collect()
}

/// Bound orbit with `p/r_M` in `[50, 5000]` and eccentricity below 0.6.
fn orbit() -> impl Strategy<Value = OrbitSpec> {
    (50.0..5000.0f64, 0.0..0.6f64).prop_map(|(p, e)| OrbitSpec::new(p, p * (1.0 + e) / (1.0 - e), 1.0).unwrap())
}

#[test]
fn turning_points_of_every_planet() {
    let r_m = sun_km();
    for (name, spec) in planet_specs() {
        let k = orbit_constants(&spec);
        for x3 in [spec.p, spec.a] {
            let x = ColumnVector::from([FRAC_PI_2, 0.0, x3, 0.0]);
            let u = four_velocity_weak(r_m, 0.0, 1.0, &k, &x).unwrap();
            assert!(u[2].abs() <= 1e-12, "{name}: u3({x3}) = {}", u[2]);
        }
    }
}

#[test]
fn numeric_precession_of_every_planet() {
    for (name, spec) in planet_specs() {
        let closed = precession(&spec).unwrap();
        let numeric = precession_numeric(&spec, 1e-11).unwrap();
        assert!((numeric - closed).abs() <= 1e-2 * closed, "{name}: {numeric} vs {closed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_velocity_normalized_in_both_geometries(spec in orbit(), t in 0.0..1.0f64, outbound in any::<bool>()) {
        let x3 = spec.p + t * (spec.a - spec.p);
        let x = ColumnVector::from([FRAC_PI_2, 0.0, x3, 0.0]);
        let weak = WeakSpherical::new(spec.r_m, 0.0, 1.0).unwrap();
        let schw = Schwarzschild::new(spec.r_m).unwrap();
        let uw = plane_orbit_velocity(&spec, x3, OrbitGeometry::Weak, outbound).unwrap();
        let us = plane_orbit_velocity(&spec, x3, OrbitGeometry::Schwarzschild, outbound).unwrap();
        prop_assert!((eval(&weak, &x).unwrap().bilinear(&uw, &uw) - 1.0).abs() < 1e-9);
        prop_assert!((eval(&schw, &x).unwrap().bilinear(&us, &us) - 1.0).abs() < 1e-9);
        for i in 0..3 {
            prop_assert_eq!(uw[i], us[i]);
        }
        let (r, sign) = (spec.r_m, if outbound { 1.0 } else { -1.0 });
        let expected = sign * 2.0 * r * spec.f1(x3).unwrap() / ((x3 - 2.0 * r) * spec.f2() * x3);
        prop_assert!((uw[3] - us[3] - expected).abs() <= 1e-12 * (1.0 + uw[3].abs()));
    }

    #[test]
    fn extreme_velocities_swap_with_the_apsides(spec in orbit()) {
        let v = extreme_velocities(&spec).unwrap();
        let (p, a, r) = (spec.p, spec.a, spec.r_m);
        prop_assert!(v.beta_min <= v.beta_max);
        let ratio = (a / p).powi(2) * (p - 2.0 * r) / (a - 2.0 * r);
        prop_assert!((v.beta_max / v.beta_min - ratio).abs() <= 1e-12 * ratio);
        let circular = extreme_velocities(&OrbitSpec::new(p, p, r).unwrap()).unwrap();
        prop_assert!((circular.beta_max - circular.beta_min).abs() <= 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn geodesic_keeps_normalization(p in 200.0..600.0f64, e in 0.05..0.4f64) {
        let spec = OrbitSpec::new(p, p * (1.0 + e) / (1.0 - e), 1.0).unwrap();
        let metric = WeakSpherical::new(1.0, 0.0, 1.0).unwrap();
        let u = plane_orbit_velocity(&spec, spec.p, OrbitGeometry::Weak, true).unwrap();
        let state = GeodesicState::new(ColumnVector::from([FRAC_PI_2, 0.0, spec.p, 0.0]), u, 0.0);
        let period = 2.0 * std::f64::consts::PI * ((spec.p + spec.a) / 2.0).powf(1.5) / 2f64.sqrt();
        let run = integrate_geodesic(&metric, &state, 2.0 * period, 1e-10).unwrap();
        prop_assert!(run.truncation_reason().is_none());
        prop_assert!(run.max_normalization_drift < 1e-9, "{}", run.max_normalization_drift);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `d²k/dx₂²` from the geodesic acceleration, `k = 1/x₃`, equals the closed-form orbit equation.
    #[test]
    fn general_orbit_equation_matches_the_geodesic(
        c5 in 0.0..1.5f64,
        c7 in 0.0..1e-4f64,
        r in 8.0..20.0f64,
        c3 in prop::sample::select(vec![1.0, -1.0]),
    ) {
        let params = SphericalSolutionParams::new(c5, 0.3, c7, 1.0).unwrap();
        let (c2, c4) = (1.1, 0.999);
        let x = ColumnVector::from([FRAC_PI_2, 0.3, r, 0.0]);
        let u = four_velocity_general(params, &MotionConstants::new(0.0, c2, c3, c4).unwrap(), &x);
        prop_assume!(u.is_ok());
        let u = u.unwrap();
        let a = geodesic_rhs(&GeneralSpherical::new(params), &GeodesicState::new(x, u.clone(), 0.0), None).unwrap();
        let (u2, u3) = (u[1], u[2]);
        let geodesic = (-a[2] / (r * r * u2) + 2.0 * u3 * u3 / (r.powi(3) * u2) + u3 * a[1] / (r * r * u2 * u2)) / u2;
        let closed = general_orbit_rhs(&params, c2, c4, 1.0 / r).unwrap();
        prop_assert!((geodesic - closed).abs() < 1e-9 * closed.abs().max(1e-2), "{} vs {}", geodesic, closed);
    }
}
