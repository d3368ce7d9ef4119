use matfield::geometry::{
    christoffel, eval, metric_derivatives, ricci, ricci_direct, riemann, sample_regular_points, DerivativeMode,
    EngineOptions, MetricField,
};
use matfield::matcore::{ColumnVector, SquareMatrix};
use matfield::metrics::{
    FlatFrameMetric, FlatFrameSpec, FriedmannLobachevsky, G33Profile, GeneralSpherical, GeneralWeak, MaximallyUniform,
    Minkowski, RectilinearSpherical, Schwarzschild, SphericalSolutionParams, WeakSpherical,
};
use proptest::prelude::*;

fn catalog() -> Vec<Box<dyn MetricField>> {
    let params = SphericalSolutionParams::new(1.0, 0.3, 1e-4, 1.0).unwrap();
    vec![
        Box::new(Minkowski::new(4)),
        Box::new(Schwarzschild::new(1.0).unwrap()),
        Box::new(WeakSpherical::new(1.0, 2e-5, 1.0).unwrap()),
        Box::new(WeakSpherical::new(0.5, -1e-4, -1.0).unwrap()),
        Box::new(GeneralSpherical::new(params)),
        Box::new(RectilinearSpherical::new(params)),
        Box::new(GeneralWeak::new(G33Profile::Constant(-1.0), 1.0, 1e-4, 1.0).unwrap()),
        Box::new(FriedmannLobachevsky::new(MaximallyUniform::new(1.0, 0.01))),
    ]
}

fn rel_diff(a: &SquareMatrix, b: &SquareMatrix) -> f64 {
    (a - b).norm_inf() / (1.0 + b.norm_inf())
}

fn points(field: &dyn MetricField, seed: u64) -> Vec<ColumnVector> {
    sample_regular_points(field, 2, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn metrics_are_symmetric_and_invertible(seed in any::<u64>()) {
        for field in catalog() {
            for x in points(field.as_ref(), seed) {
                let g = eval(field.as_ref(), &x).unwrap();
                prop_assert!(g.asymmetry() <= 1e-12, "{}", field.name());
                let round = g.mat_mul(&g.inverse().unwrap()).unwrap();
                prop_assert!((&round - &SquareMatrix::identity(g.dim())).norm_inf() < 1e-10, "{}", field.name());
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_differences(seed in any::<u64>()) {
        let fd = EngineOptions { derivative: DerivativeMode::FiniteDifference, ..EngineOptions::default() };
        for field in catalog() {
            for x in points(field.as_ref(), seed) {
                let Some(analytic) = field.d_components(&x).unwrap() else { continue };
                let numeric = metric_derivatives(field.as_ref(), &x, &fd).unwrap();
                for (a, n) in analytic.iter().zip(&numeric) {
                    prop_assert!(rel_diff(n, a) < 1e-6, "{} at {:?}", field.name(), x.as_slice());
                }
            }
        }
    }

    #[test]
    fn christoffel_relations(seed in any::<u64>()) {
        for field in catalog() {
            for x in points(field.as_ref(), seed) {
                let c = christoffel(field.as_ref(), &x).unwrap();
                let n = c.metric.dim();
                for m in 0..n {
                    let lowered = c.metric.mat_mul(&c.second_kind[m]).unwrap();
                    prop_assert!(rel_diff(&lowered, &c.first_kind[m]) < 1e-9, "{}", field.name());
                    for k in 0..n {
                        let scale = 1.0 + c.second_kind[m].norm_inf().max(c.second_kind[k].norm_inf());
                        let diff = (&c.second_kind[m].column(k) - &c.second_kind[k].column(m)).max_abs();
                        prop_assert!(diff <= 1e-9 * scale, "{} m={} k={}", field.name(), m, k);
                    }
                }
            }
        }
    }

    #[test]
    fn riemann_antisymmetries_and_ricci_paths(seed in any::<u64>()) {
        for field in catalog() {
            for x in points(field.as_ref(), seed) {
                let r = riemann(field.as_ref(), &x).unwrap();
                let n = r.sigma_ab.len();
                for a in 0..n {
                    for b in 0..n {
                        let anti = (&r.sigma_ab[a][b] + &r.sigma_ab[b][a]).norm_inf();
                        prop_assert!(anti <= 1e-12 * (1.0 + r.sigma_ab[a][b].norm_inf()));
                        let g = &r.gamma_ab[a][b];
                        prop_assert!((g + &g.transpose()).norm_inf() < 1e-8, "{} ({},{})", field.name(), a, b);
                    }
                }
                let bundle = ricci(field.as_ref(), &x).unwrap();
                let direct = ricci_direct(field.as_ref(), &x).unwrap();
                prop_assert!(rel_diff(&direct, &bundle.ricci) < 1e-8, "{}", field.name());
            }
        }
    }

    #[test]
    fn general_spherical_tends_to_weak(
        r_m in 0.5..2.0f64,
        c7 in -1e-4..1e-4f64,
        r in 5.0..40.0f64,
        theta in 0.3..2.8f64,
    ) {
        let c5 = 1e-6 * r;
        let general = GeneralSpherical::new(SphericalSolutionParams::new(c5, 3.0 * r_m, c7, 1.0).unwrap());
        let weak = WeakSpherical::new(r_m, c7, 1.0).unwrap();
        let x = ColumnVector::from(vec![theta, 0.4, r, 1.0]);
        prop_assume!(general.singular_reason(&x).is_none() && weak.singular_reason(&x).is_none());
        let diff = (&eval(&general, &x).unwrap() - &eval(&weak, &x).unwrap()).max_abs();
        prop_assert!(diff < 1e-8, "{}", diff);
    }

    #[test]
    fn general_weak_block_determinant(r in 3.0..50.0f64, g33 in -3.0..-0.2f64) {
        let field = GeneralWeak::new(G33Profile::Constant(g33), 1.0, 1e-4, 1.0).unwrap();
        let x = ColumnVector::from(vec![1.0, 0.0, r, 0.0]);
        prop_assume!(field.singular_reason(&x).is_none());
        let g = eval(&field, &x).unwrap();
        let det = g[(2, 2)] * g[(3, 3)] - g[(2, 3)] * g[(2, 3)];
        prop_assert!((det + 1.0).abs() < 1e-12, "{}", det);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn random_flat_frames_have_no_curvature(seed in any::<u64>()) {
        let metric = FlatFrameMetric::new(FlatFrameSpec::random(4, seed).unwrap());
        for x in sample_regular_points(&metric, 3, seed).unwrap() {
            prop_assert!(riemann(&metric, &x).unwrap().max_sigma_norm() < 1e-8);
        }
    }
}
