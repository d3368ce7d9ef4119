//! Five-point central differences.

use crate::matcore::{ColumnVector, SquareMatrix};

/// Step `rel·max(1, |xᵢ|)`.
pub fn fd_step(xi: f64, rel: f64) -> f64 {
    rel * xi.abs().max(1.0)
}

/// Values that can be combined by the difference stencil.
pub trait FdValue: Sized {
    /// `(−f(+2h) + 8f(+h) − 8f(−h) + f(−2h)) / 12h` from samples at `[+2h, +h, −h, −2h]`.
    fn five_point(samples: [&Self; 4], h: f64) -> Self;
}

impl FdValue for f64 {
    fn five_point(s: [&Self; 4], h: f64) -> Self {
        (-s[0] + 8.0 * s[1] - 8.0 * s[2] + s[3]) / (12.0 * h)
    }
}

impl FdValue for SquareMatrix {
    fn five_point(s: [&Self; 4], h: f64) -> Self {
        SquareMatrix::from_fn(s[0].dim(), |i, j| {
            f64::five_point([&s[0][(i, j)], &s[1][(i, j)], &s[2][(i, j)], &s[3][(i, j)]], h)
        })
    }
}

impl<T: FdValue> FdValue for Vec<T> {
    fn five_point(s: [&Self; 4], h: f64) -> Self {
        (0..s[0].len()).map(|k| T::five_point([&s[0][k], &s[1][k], &s[2][k], &s[3][k]], h)).collect()
    }
}

/// Combines stencil samples into a derivative estimate.
pub fn five_point<T: FdValue>(samples: &[T; 4], h: f64) -> T {
    T::five_point([&samples[0], &samples[1], &samples[2], &samples[3]], h)
}

/// Evaluates `f` at `x + k·h·i(axis)` for `k = 2, 1, −1, −2`.
pub(crate) fn stencil<T, E>(
    x: &ColumnVector,
    axis: usize,
    h: f64,
    mut f: impl FnMut(&ColumnVector) -> Result<T, E>,
) -> Result<[T; 4], E> {
    let at = |k: f64| x.with(axis, x[axis] + k * h);
    Ok([f(&at(2.0))?, f(&at(1.0))?, f(&at(-1.0))?, f(&at(-2.0))?])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_quartic() {
        let x = ColumnVector::from([0.7]);
        let h = 1e-2;
        let s = stencil(&x, 0, h, |p| Ok::<_, ()>(p[0].powi(4) - 2.0 * p[0].powi(3))).unwrap();
        let d = five_point(&s, h);
        let want = 4.0 * 0.7f64.powi(3) - 6.0 * 0.49;
        assert!((d - want).abs() < 1e-12);
    }

    #[test]
    fn step_scales_with_coordinate() {
        assert_eq!(fd_step(0.1, 1e-5), 1e-5);
        assert!((fd_step(-30.0, 1e-5) - 3e-4).abs() < 1e-18);
    }
}
