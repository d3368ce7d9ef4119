use matfield::matcore::{generalized_eigenvalues, ColumnVector, SquareMatrix};
use proptest::prelude::*;

fn matrix4() -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(-1.0..1.0f64, 16).prop_map(|v| SquareMatrix::from_row_major(4, v).expect("16 entries"))
}

/// Symmetric, with the diagonal pushed away from zero and mixed signs.
fn symmetric_invertible() -> impl Strategy<Value = SquareMatrix> {
    (matrix4(), prop::collection::vec(prop::bool::ANY, 4)).prop_map(|(a, signs)| {
        let s = &a + &a.transpose();
        SquareMatrix::from_fn(4, |i, j| {
            let d = if signs[i] { 5.0 } else { -5.0 };
            s[(i, j)] + if i == j { d } else { 0.0 }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_is_cyclic(a in matrix4(), b in matrix4()) {
        let ab = a.mat_mul(&b).unwrap().trace();
        let ba = b.mat_mul(&a).unwrap().trace();
        prop_assert!((ab - ba).abs() <= 1e-12 * (1.0 + ab.abs()));
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix4(), b in matrix4()) {
        let lhs = a.mat_mul(&b).unwrap().det();
        let rhs = a.det() * b.det();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }

    #[test]
    fn transpose_is_an_involution(a in matrix4()) {
        prop_assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn inverse_round_trip(g in symmetric_invertible()) {
        let err = (&g.mat_mul(&g.inverse().unwrap()).unwrap() - &SquareMatrix::identity(4)).norm_inf();
        prop_assert!(err < 1e-10);
    }

    #[test]
    fn linear_solve_round_trip(g in symmetric_invertible(), v in prop::collection::vec(-10.0..10.0f64, 4)) {
        let v = ColumnVector::from(v);
        let back = g.linear_solve(&g.mat_vec(&v).unwrap()).unwrap();
        prop_assert!((&back - &v).max_abs() <= 1e-12 * (1.0 + v.max_abs()));
    }

    #[test]
    fn proportional_pencil_has_one_eigenvalue(g in symmetric_invertible(), rho in -1e3..1e3f64) {
        let e = generalized_eigenvalues(&g.scale(rho), &g).unwrap();
        prop_assert_eq!(e.values.len(), 4);
        for mu in &e.values {
            prop_assert!((mu - rho).abs() <= 1e-9 * (1.0 + rho.abs()), "{} vs {}", mu, rho);
        }
        prop_assert!(e.residual < 1e-9 * (1.0 + rho.abs()));
    }
}
