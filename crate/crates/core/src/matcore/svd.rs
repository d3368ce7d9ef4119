//! One-sided Jacobi singular value decomposition for small square matrices.

use super::{ColumnVector, SquareMatrix};

/// Singular values in ascending order with the matching right singular vectors.
#[derive(Debug, Clone)]
pub struct SingularDecomposition {
    pub values: Vec<f64>,
    pub right_vectors: Vec<ColumnVector>,
}

const MAX_SWEEPS: usize = 60;

/// Hestenes one-sided Jacobi: orthogonalizes the columns of `A V`.
pub fn singular_decomposition(a: &SquareMatrix) -> SingularDecomposition {
    let n = a.dim();
    let mut u: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| a[(i, j)]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = u[p].iter().map(|x| x * x).sum();
                let beta: f64 = u[q].iter().map(|x| x * x).sum();
                let gamma: f64 = u[p].iter().zip(&u[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for cols in [&mut u, &mut v] {
                    for i in 0..n {
                        let (xp, xq) = (cols[p][i], cols[q][i]);
                        cols[p][i] = c * xp - s * xq;
                        cols[q][i] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> =
        u.iter().enumerate().map(|(j, col)| (col.iter().map(|x| x * x).sum::<f64>().sqrt(), j)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    SingularDecomposition {
        values: order.iter().map(|o| o.0).collect(),
        right_vectors: order.iter().map(|o| ColumnVector::from(v[o.1].clone())).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values() {
        let d = singular_decomposition(&SquareMatrix::from_diag(&[3.0, -1.0, 0.0, 2.0]));
        assert_eq!(d.values.len(), 4);
        for (got, want) in d.values.iter().zip([0.0, 1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn vectors_reproduce_values() {
        let a = SquareMatrix::from_rows([[1.0, 2.0, 0.5], [0.0, -1.0, 3.0], [2.0, 2.0, 1.0]]);
        let d = singular_decomposition(&a);
        for (s, v) in d.values.iter().zip(&d.right_vectors) {
            assert!((v.norm() - 1.0).abs() < 1e-14);
            assert!((a.mat_vec(v).unwrap().norm() - s).abs() < 1e-13);
        }
        let prod: f64 = d.values.iter().product();
        assert!((prod - a.det().abs()).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_has_zero_value() {
        let a = SquareMatrix::from_rows([[1.0, 2.0], [2.0, 4.0]]);
        let d = singular_decomposition(&a);
        assert!(d.values[0] < 1e-15);
    }
}
