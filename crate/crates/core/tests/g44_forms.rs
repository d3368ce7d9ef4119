use matfield::geometry::{verify_field_equation, Chart, GeometryError, MetricField};
use matfield::matcore::{ColumnVector, SquareMatrix};
use matfield::metrics::{GeneralSpherical, RectilinearSpherical, SphericalSolutionParams};

/// The general solution with `g44` replaced by `1 − 2c6/(3rh) − c7r²`.
struct StatedG44(GeneralSpherical);

impl MetricField for StatedG44 {
    fn name(&self) -> String {
        "general-spherical with g44 = 1 - 2c6/(3rh) - c7 r^2".into()
    }
    fn dim(&self) -> usize {
        4
    }
    fn chart(&self) -> Chart {
        Chart::Spherical
    }
    fn components(&self, x: &ColumnVector) -> Result<SquareMatrix, GeometryError> {
        let mut g = self.0.components(x)?;
        let r = x[2];
        let h = (r.powi(3) - self.0.params.c5.powi(3)).cbrt() / r;
        g[(3, 3)] = 1.0 - 2.0 * self.0.params.c6 / (3.0 * r * h) - self.0.params.c7 * r * r;
        Ok(g)
    }
}

fn point(r: f64) -> ColumnVector {
    ColumnVector::from([1.1, 0.4, r, 0.0])
}

#[test]
fn frame_g44_equals_its_closed_form() {
    for (c5, c8) in [(0.0, 1.0), (1.0, 1.0), (1.0, -1.0)] {
        let m = GeneralSpherical::new(SphericalSolutionParams::new(c5, 0.3, 1e-2, c8).unwrap());
        for r in [2.0, 5.0, 20.0] {
            let g44 = m.components(&point(r)).unwrap()[(3, 3)];
            assert!((g44 - m.g44_closed_form(r)).abs() < 1e-12 * (1.0 + g44.abs()), "c5 = {c5}, r = {r}");
        }
    }
}

#[test]
fn c7_r_squared_g44_fails_the_field_equation_with_c5() {
    let m = GeneralSpherical::new(SphericalSolutionParams::new(1.0, 0.3, 1e-2, 1.0).unwrap());
    let stated = StatedG44(m.clone());
    for r in [2.0, 3.0, 5.0] {
        let x = point(r);
        assert!(verify_field_equation(&m, &x).unwrap().max_residual < 1e-6);
        let res = verify_field_equation(&stated, &x).unwrap().max_residual;
        assert!(res > 1e-4, "r = {r}: {res:e}");
    }
}

#[test]
fn rectilinear_g44_matches_its_closed_form() {
    for c5 in [0.0, 1.0] {
        let m = RectilinearSpherical::new(SphericalSolutionParams::new(c5, 0.3, 1e-4, 1.0).unwrap());
        for r in [2.0, 5.0, 20.0] {
            let x = ColumnVector::from([r * 0.6, 0.0, r * 0.8, 0.3]);
            let g44 = m.components(&x).unwrap()[(3, 3)];
            assert!((g44 - m.g44_closed_form(r)).abs() < 1e-12 * (1.0 + g44.abs()), "c5 = {c5}, r = {r}");
        }
    }
}

