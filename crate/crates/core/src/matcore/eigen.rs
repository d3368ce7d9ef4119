//! Eigenvalues of `g⁻¹R` through the characteristic polynomial.
//!
//! Faddeev–LeVerrier gives the coefficients, Durand–Kerner the roots. Multiple
//! eigenvalues are the normal case here (`R = ρg` has a single eigenvalue of
//! multiplicity four), and polynomial roots of a multiple eigenvalue scatter
//! like `ε^{1/k}`, sometimes into conjugate pairs. Nearby roots are therefore
//! merged into their centroid, but only when `M − cI` really has a null space
//! of the cluster's size. The reported residual measures that null space.

use num_complex::Complex64;

use super::{singular_decomposition, MatrixError, SquareMatrix};

/// Real spectrum of a matrix or pencil.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSet {
    /// Eigenvalues sorted descending, repeated by multiplicity.
    pub values: Vec<f64>,
    /// Max over distinct values of `‖(M − μI)v‖` for unit eigenvectors `v`.
    pub residual: f64,
    /// Largest imaginary part that was truncated.
    pub complex_discarded: f64,
}

impl EigenSet {
    /// Pairwise gaps `μᵢ − μⱼ` for `i < j`.
    pub fn gaps(&self) -> Vec<f64> {
        let v = &self.values;
        let mut out = Vec::with_capacity(v.len() * (v.len().saturating_sub(1)) / 2);
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                out.push(v[i] - v[j]);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Imaginary parts up to `imag_tol·(1+|μ|)` are truncated.
    pub imag_tol: f64,
    /// Inputs must satisfy `max|a − aᵀ| ≤ symmetry_tol·(1 + max|a|)`.
    pub symmetry_tol: f64,
    /// A cluster of size `k` is merged when `M − cI` has `k` singular values
    /// below `rank_tol·(1 + ‖M‖∞)`.
    pub rank_tol: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { imag_tol: 1e-8, symmetry_tol: 1e-8, rank_tol: 1e-7 }
    }
}

/// Characteristic polynomial `det(λI − A)` as monic coefficients, highest power first.
pub fn characteristic_polynomial(a: &SquareMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut m = SquareMatrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let mut next = a * &m;
        for i in 0..n {
            next[(i, i)] += coeffs[k - 1];
        }
        m = next;
        coeffs[k] = -(a * &m).trace() / k as f64;
    }
    coeffs
}

const DK_MAX_ITER: usize = 2000;

/// All complex roots of the polynomial with coefficients `coeffs` (highest power first).
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>, MatrixError> {
    let lead = coeffs.iter().position(|&c| c != 0.0).ok_or(MatrixError::EmptyMatrix)?;
    let c: Vec<f64> = coeffs[lead..].iter().map(|v| v / coeffs[lead]).collect();
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let eval = |z: Complex64| c.iter().fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * z + ci);
    let bound = 1.0 + c[1..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();

    let mut converged = false;
    for _ in 0..DK_MAX_ITER {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(f64::EPSILON, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = delta.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if !roots.iter().all(|r| r.re.is_finite() && r.im.is_finite()) {
            return Err(MatrixError::NoConvergence { iterations: DK_MAX_ITER });
        }
        if delta < 1e-15 {
            converged = true;
            break;
        }
    }
    // Clustered roots converge linearly and may stop short of `delta < 1e-15`;
    // they are still as accurate as the conditioning allows.
    let _ = converged;
    Ok(roots)
}

/// Spectrum of the pencil `(R, g)`, i.e. of `g⁻¹R`, with default options.
pub fn generalized_eigenvalues(r: &SquareMatrix, g: &SquareMatrix) -> Result<EigenSet, MatrixError> {
    generalized_eigenvalues_with(r, g, &EigenOptions::default())
}

pub fn generalized_eigenvalues_with(
    r: &SquareMatrix,
    g: &SquareMatrix,
    opts: &EigenOptions,
) -> Result<EigenSet, MatrixError> {
    if r.dim() != g.dim() {
        return Err(MatrixError::DimensionMismatch { left: r.dim(), right: g.dim() });
    }
    for m in [r, g] {
        let violation = m.asymmetry();
        if violation > opts.symmetry_tol * (1.0 + m.max_abs()) {
            return Err(MatrixError::NotSymmetric { violation });
        }
    }
    let m = g.solve_matrix(r)?;
    matrix_eigenvalues(&m, opts)
}

/// Real eigenvalues of a general square matrix expected to have real spectrum.
pub fn matrix_eigenvalues(m: &SquareMatrix, opts: &EigenOptions) -> Result<EigenSet, MatrixError> {
    let n = m.dim();
    let tau = m.trace() / n as f64;
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= tau;
    }
    let scale = a.norm_inf();
    if scale == 0.0 {
        return Ok(EigenSet { values: vec![tau; n], residual: 0.0, complex_discarded: 0.0 });
    }
    let roots: Vec<Complex64> = polynomial_roots(&characteristic_polynomial(&a.scale(1.0 / scale)))?
        .into_iter()
        .map(|z| z * scale + tau)
        .collect();

    let m_norm = m.norm_inf();
    let rank_tol = opts.rank_tol * (1.0 + m_norm);
    let null_residuals = |c: f64, k: usize| -> Vec<f64> {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= c;
        }
        let svd = singular_decomposition(&shifted);
        svd.right_vectors[..k].iter().map(|v| shifted.mat_vec(v).expect("square").norm()).collect()
    };

    // Single-link components at increasing radius; a component replaces its
    // sub-clusters whenever it passes the null-space test as a whole.
    let k_roots = roots.len();
    let mut thresholds: Vec<f64> = Vec::new();
    for i in 0..k_roots {
        for j in i + 1..k_roots {
            let d = (roots[i] - roots[j]).norm();
            if d <= 0.25 * scale {
                thresholds.push(d);
            }
        }
    }
    thresholds.sort_by(f64::total_cmp);
    let mut label: Vec<usize> = (0..k_roots).collect();
    for &t in &thresholds {
        let mut comp: Vec<usize> = (0..k_roots).collect();
        loop {
            let mut changed = false;
            for i in 0..k_roots {
                for j in 0..k_roots {
                    if (roots[i] - roots[j]).norm() <= t && comp[j] < comp[i] {
                        comp[i] = comp[j];
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for root in 0..k_roots {
            if comp[root] != root {
                continue;
            }
            let members: Vec<usize> = (0..k_roots).filter(|&i| comp[i] == root).collect();
            if members.len() < 2 || members.iter().all(|&i| label[i] == label[members[0]]) {
                continue;
            }
            let c = members.iter().map(|&i| roots[i]).sum::<Complex64>() / members.len() as f64;
            if null_residuals(c.re, members.len()).iter().all(|&s| s <= rank_tol) {
                for &i in &members {
                    label[i] = root;
                }
            }
        }
    }
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..k_roots {
        if !seen.contains(&label[i]) {
            seen.push(label[i]);
            clusters.push((0..k_roots).filter(|&j| label[j] == label[i]).map(|j| roots[j]).collect());
        }
    }

    let mut values = Vec::with_capacity(n);
    let mut residual: f64 = 0.0;
    let mut complex_discarded: f64 = 0.0;
    for cl in &clusters {
        let c = cl.iter().sum::<Complex64>() / cl.len() as f64;
        let k = cl.len();
        // A merged cluster has a verified real null space of size k; only an
        // isolated root can be genuinely complex.
        let tol = opts.imag_tol * (1.0 + c.re.abs());
        if k == 1 && c.im.abs() > tol {
            return Err(MatrixError::NonRealSpectrum { imag: c.im.abs(), tol });
        }
        complex_discarded = complex_discarded.max(c.im.abs());
        let mu = refine(m, c.re, k);
        residual = residual.max(null_residuals(mu, k).into_iter().fold(0.0, f64::max));
        values.extend(std::iter::repeat_n(mu, k));
    }
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(EigenSet { values, residual, complex_discarded })
}

/// Improves a `k`-fold eigenvalue estimate by the projected trace
/// `tr(VᵀMV)/k` over the approximate null space `V` of `M − cI`.
fn refine(m: &SquareMatrix, mut c: f64, k: usize) -> f64 {
    let n = m.dim();
    for _ in 0..12 {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= c;
        }
        let svd = singular_decomposition(&shifted);
        let next = svd.right_vectors[..k].iter().map(|v| v.dot(&m.mat_vec(v).expect("square"))).sum::<f64>() / k as f64;
        if !next.is_finite() {
            break;
        }
        let done = (next - c).abs() <= 4.0 * f64::EPSILON * (1.0 + c.abs());
        c = next;
        if done {
            break;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_diagonal() {
        let c = characteristic_polynomial(&SquareMatrix::from_diag(&[1.0, 2.0, 3.0]));
        for (got, want) in c.iter().zip([1.0, -6.0, 11.0, -6.0]) {
            assert!((got - want).abs() < 1e-13);
        }
    }

    #[test]
    fn char_poly_matches_det_oracle() {
        let a = SquareMatrix::from_rows([[1.0, 2.0, 0.5, 0.0], [0.3, -1.0, 0.2, 1.0], [2.0, 0.0, 1.0, -0.7], [0.1, 0.4, 0.0, 2.0]]);
        let c = characteristic_polynomial(&a);
        for lambda in [-1.3, 0.0, 0.7, 2.2] {
            let shifted = &SquareMatrix::identity(4).scale(lambda) - &a;
            let p = c.iter().fold(0.0, |acc, v| acc * lambda + v);
            assert!((p - shifted.det()).abs() < 1e-12 * (1.0 + p.abs()));
        }
    }

    #[test]
    fn roots_of_cubic() {
        let mut r = polynomial_roots(&[1.0, -6.0, 11.0, -6.0]).unwrap();
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (z, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn complex_roots_found() {
        let r = polynomial_roots(&[1.0, 0.0, 1.0]).unwrap();
        assert!(r.iter().all(|z| (z.norm() - 1.0).abs() < 1e-14 && z.re.abs() < 1e-14));
    }

    #[test]
    fn flat_pencil_is_zero() {
        let g = SquareMatrix::from_diag(&[-1.0, -1.0, -1.0, 1.0]);
        let e = generalized_eigenvalues(&SquareMatrix::zeros(4), &g).unwrap();
        assert_eq!(e.values, vec![0.0; 4]);
    }

    #[test]
    fn proportional_pencil() {
        let g = SquareMatrix::from_rows([[-2.0, 0.3, 0.0, 0.1], [0.3, -1.0, 0.2, 0.0], [0.0, 0.2, -1.5, 0.4], [0.1, 0.0, 0.4, 1.2]]);
        let e = generalized_eigenvalues(&g.scale(0.37), &g).unwrap();
        assert!(e.values.iter().all(|v| (v - 0.37).abs() < 1e-12), "{:?}", e.values);
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn triple_plus_single() {
        // g⁻¹R = μ₁ I + (μ₄ − μ₁) u ũg with ũgu = 1
        let g = SquareMatrix::from_diag(&[-1.0, -1.0, -1.0, 1.0]);
        let u = crate::matcore::ColumnVector::from([0.1, 0.2, -0.3, (1.0f64 + 0.14).sqrt()]);
        let gu = g.mat_vec(&u).unwrap();
        let (mu1, mu4) = (0.25, -0.8);
        let r = &g.scale(mu1) + &SquareMatrix::outer(&gu, &gu).scale(mu4 - mu1);
        let e = generalized_eigenvalues(&r, &g).unwrap();
        let want = [mu1, mu1, mu1, mu4];
        for (got, w) in e.values.iter().zip(want) {
            assert!((got - w).abs() < 1e-12, "{:?}", e.values);
        }
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn distinct_real_spectrum() {
        let r = SquareMatrix::from_diag(&[3.0, -1.0, 0.5, 2.0]);
        let e = generalized_eigenvalues(&r, &SquareMatrix::identity(4)).unwrap();
        assert_eq!(e.values.len(), 4);
        for (got, w) in e.values.iter().zip([3.0, 2.0, 0.5, -1.0]) {
            assert!((got - w).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_spectrum_rejected() {
        // symmetric R against an indefinite g can give a complex pair
        let g = SquareMatrix::from_diag(&[-1.0, 1.0]);
        let r = SquareMatrix::from_rows([[0.0, 1.0], [1.0, 0.0]]);
        assert!(matches!(generalized_eigenvalues(&r, &g), Err(MatrixError::NonRealSpectrum { .. })));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let r = SquareMatrix::from_rows([[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(
            generalized_eigenvalues(&r, &SquareMatrix::identity(2)),
            Err(MatrixError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn noisy_multiple_root_merges() {
        let g = SquareMatrix::from_diag(&[-1.0, -1.0, -1.0, 1.0]);
        let noise = SquareMatrix::from_fn(4, |i, j| 1e-10 * ((i * 7 + j * 3) as f64).sin());
        let r = &g.scale(6e-5) + &noise.symmetrized();
        let e = generalized_eigenvalues(&r, &g).unwrap();
        assert!(e.values.iter().all(|v| (v - 6e-5).abs() < 1e-9), "{:?}", e.values);
        assert!(e.residual < 1e-9);
    }
}
