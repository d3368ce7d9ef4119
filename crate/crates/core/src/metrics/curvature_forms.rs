//! Closed-form curvature matrices `σ^{ab}` of the general static solution.
//!
//! Each `σ^{ab}` is a scalar `w₁` or `w₂` times a sparse pattern built from
//! `w₃, w₄, w₅`. Two sets of scalars are provided: the originally stated set
//! ("printed") and the set derived from the metric components themselves
//! (`g44 = 1 + w₂`, `g34 = −w₃ w0^{2/3}`). They differ in `w₂` (sign of the
//! density term) and `w₃` (a spurious `2/3` on the density term); the
//! erratum report lists every matrix entry affected.

use crate::geometry::{riemann, GeometryError};
use crate::matcore::{ColumnVector, SquareMatrix};

use super::spherical::{GeneralSpherical, SphericalSolutionParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WForms {
    pub w0: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
}

/// Scalars in their originally stated form.
pub fn w_forms_printed(p: &SphericalSolutionParams, x3: f64) -> WForms {
    let SphericalSolutionParams { c5, c6, c7, c8 } = *p;
    let w0 = x3.powi(3) - c5.powi(3);
    let w13 = w0.cbrt();
    let w23 = w13 * w13;
    let w1 = (-c6 + 3.0 * w0 * c7) / (3.0 * w13);
    let w2 = (-2.0 * c6 + 3.0 * w0 * c7) / (3.0 * w13);
    let w3 = c8
        * (2.0 * x3.powi(3) * c5.powi(3) - c5.powi(6) + 2.0 / 3.0 * (w0.powf(5.0 / 3.0) * c6 + w0.powf(8.0 / 3.0) * c7))
            .sqrt()
        / (x3 * w0.powf(4.0 / 3.0));
    let w4 = (2.0 * c6 - 3.0 * (w13 - w0 * c7)) / (3.0 * w0);
    let inner = -2.0 / 3.0 * c5.powi(3) * w23 * c6
        + x3.powi(6) * w23 * c7
        + c5.powi(6) * (-1.0 + w23 * c7 + x3.powi(3) * (2.0 / 3.0 * w23 * c6 + 2.0 * c5.powi(3) * (1.0 - w23 * c7)));
    let w5 = c8 / (x3 * w0.powf(4.0 / 3.0)) * inner.sqrt();
    WForms { w0, w1, w2, w3, w4, w5 }
}

/// Scalars derived from the metric: `w₂ = g44 − 1`, `w₃ = −g34 / w0^{2/3}`.
pub fn w_forms_from_metric(metric: &GeneralSpherical, x3: f64) -> Result<WForms, GeometryError> {
    let printed = w_forms_printed(&metric.params, x3);
    let block = metric.block(x3)?;
    let w23 = printed.w0.cbrt().powi(2);
    let w3 = -block.g34 / w23;
    Ok(WForms { w2: block.g44 - 1.0, w3, ..printed })
}

/// `σ^{ab}` (0-based `a < b`) from a set of scalars; `σ^{ba} = −σ^{ab}`.
pub fn sigma_ab_closed_form(w: &WForms, x1: f64, x3: f64) -> Vec<Vec<SquareMatrix>> {
    let s2 = x1.sin().powi(2);
    let ir2 = 1.0 / (x3 * x3);
    let WForms { w1, w2, w3, w4, w5, .. } = *w;
    let mut out = vec![vec![SquareMatrix::zeros(4); 4]; 4];
    let z = 0.0;
    let patterns = [
        (0, 1, w2, [[z, -s2, z, z], [1.0, z, z, z], [z, z, z, z], [z, z, z, z]]),
        (0, 2, w1, [[z, z, ir2, w3], [z, z, z, z], [-1.0, z, z, z], [z, z, z, z]]),
        (0, 3, w1, [[z, z, w3, w4], [z, z, z, z], [z, z, z, z], [-1.0, z, z, z]]),
        (1, 2, w1, [[z, z, z, z], [z, z, ir2, w3], [z, -s2, z, z], [z, z, z, z]]),
        (1, 3, w1, [[z, z, z, z], [z, z, w3, w4], [z, z, z, z], [z, -s2, z, z]]),
        (2, 3, w2, [[z, z, z, z], [z, z, z, z], [z, z, -w5, -w4], [z, z, ir2, w5]]),
    ];
    for (a, b, scale, rows) in patterns {
        let m = SquareMatrix::from_rows(rows).scale(scale);
        out[b][a] = m.scale(-1.0);
        out[a][b] = m;
    }
    out
}

/// One `σ^{ab}` entry where the printed form disagrees with the numeric curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct ErratumEntry {
    /// 1-based curvature-matrix labels `(a, b)` and entry `(row, col)`.
    pub ab: (usize, usize),
    pub entry: (usize, usize),
    pub numeric: f64,
    pub printed: f64,
    pub derived: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErratumReport {
    pub point: ColumnVector,
    pub printed: WForms,
    pub derived: WForms,
    /// Entries whose printed value misses the numeric one by more than the tolerance.
    pub entries: Vec<ErratumEntry>,
    /// Largest relative deviation of the derived closed form from the numeric matrices.
    pub derived_max_rel_error: f64,
    pub printed_max_rel_error: f64,
}

impl ErratumReport {
    pub fn render(&self) -> String {
        let mut s = format!("sigma^{{ab}} closed-form comparison at x = {}\n", self.point);
        s.push_str(&format!(
            "  printed w: w1={:.9e} w2={:.9e} w3={:.9e} w4={:.9e} w5={:.9e}\n",
            self.printed.w1, self.printed.w2, self.printed.w3, self.printed.w4, self.printed.w5
        ));
        s.push_str(&format!(
            "  derived w: w1={:.9e} w2={:.9e} w3={:.9e} w4={:.9e} w5={:.9e}\n",
            self.derived.w1, self.derived.w2, self.derived.w3, self.derived.w4, self.derived.w5
        ));
        s.push_str(&format!(
            "  max rel error: printed {:.3e}, derived {:.3e}\n",
            self.printed_max_rel_error, self.derived_max_rel_error
        ));
        for e in &self.entries {
            s.push_str(&format!(
                "  sigma^{}{} ({},{}): numeric {:.9e}  printed {:.9e}  derived {:.9e}\n",
                e.ab.0, e.ab.1, e.entry.0, e.entry.1, e.numeric, e.printed, e.derived
            ));
        }
        s
    }
}

/// Compares numeric `σ^{ab}` with both closed forms, entrywise relative to
/// `max(|numeric|, max_entry·1e-3)` so structurally zero entries do not
/// produce spurious ratios.
pub fn w_form_erratum(metric: &GeneralSpherical, x: &ColumnVector, rel_tol: f64) -> Result<ErratumReport, GeometryError> {
    let numeric = riemann(metric, x)?.sigma_ab;
    let printed_w = w_forms_printed(&metric.params, x[2]);
    let derived_w = w_forms_from_metric(metric, x[2])?;
    let printed = sigma_ab_closed_form(&printed_w, x[0], x[2]);
    let derived = sigma_ab_closed_form(&derived_w, x[0], x[2]);
    let floor = 1e-3 * numeric.iter().flatten().map(SquareMatrix::max_abs).fold(0.0, f64::max);
    let rel = |got: f64, want: f64| (got - want).abs() / want.abs().max(floor).max(f64::MIN_POSITIVE);
    let mut entries = Vec::new();
    let (mut pmax, mut dmax): (f64, f64) = (0.0, 0.0);
    for a in 0..4 {
        for b in a + 1..4 {
            for i in 0..4 {
                for j in 0..4 {
                    let n = numeric[a][b][(i, j)];
                    let p = printed[a][b][(i, j)];
                    let d = derived[a][b][(i, j)];
                    let (ep, ed) = (rel(p, n), rel(d, n));
                    pmax = pmax.max(if ep.is_nan() { f64::INFINITY } else { ep });
                    dmax = dmax.max(ed);
                    if !(ep <= rel_tol) {
                        entries.push(ErratumEntry { ab: (a + 1, b + 1), entry: (i + 1, j + 1), numeric: n, printed: p, derived: d });
                    }
                }
            }
        }
    }
    Ok(ErratumReport {
        point: x.clone(),
        printed: printed_w,
        derived: derived_w,
        entries,
        derived_max_rel_error: dmax,
        printed_max_rel_error: pmax,
    })
}
