//! Least-squares comparison of the Big Bang density curve with a spectrum.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CosmoError;

/// Fewest samples accepted by [`spectrum_compare`].
pub const MIN_SPECTRUM_SAMPLES: usize = 10;

const SCAN_POINTS: usize = 400;
const SCAN_MARGIN: f64 = 3.0;
const GOLDEN_ITERATIONS: usize = 80;
const NEWTON_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Deserialize, Serialize)]
pub struct SpectrumSample {
    pub s: f64,
    pub intensity: f64,
}

impl SpectrumSample {
    pub fn validate(&self) -> Result<(), CosmoError> {
        if !(self.s > 0.0 && self.s.is_finite()) {
            return Err(CosmoError::Data(format!("abscissa must be positive, got {}", self.s)));
        }
        if !(self.intensity >= 0.0 && self.intensity.is_finite()) {
            return Err(CosmoError::Data(format!("intensity must be non-negative, got {}", self.intensity)));
        }
        Ok(())
    }
}

/// Reads `s,intensity` CSV; `#` lines are comments.
pub fn parse_spectrum<R: Read>(reader: R) -> Result<Vec<SpectrumSample>, CosmoError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| CosmoError::Data(e.to_string()))?.clone();
    if headers.iter().ne(["s", "intensity"]) {
        return Err(CosmoError::Data(format!("expected header s,intensity, got {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let samples: Vec<SpectrumSample> =
        rdr.deserialize().map(|r| r.map_err(|e| CosmoError::Data(e.to_string()))).collect::<Result<_, _>>()?;
    samples.iter().try_for_each(SpectrumSample::validate)?;
    Ok(samples)
}

pub fn load_spectrum(path: impl AsRef<Path>) -> Result<Vec<SpectrumSample>, CosmoError> {
    let file = std::fs::File::open(path.as_ref()).map_err(|e| CosmoError::Data(format!("{}: {e}", path.as_ref().display())))?;
    parse_spectrum(file)
}

/// Fitted `(s_m, ρ_m)` and goodness of fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumFit {
    pub d: f64,
    pub s_m: f64,
    /// Fitted peak in the original intensity units.
    pub rho_scale: f64,
    /// RMS residual in units of the fitted peak.
    pub rms_residual: f64,
    /// `(s_peak − s_m)/s_m`, with `s_peak` the abscissa of the largest sample.
    pub peak_offset: f64,
}

/// `64q³/(1+q)⁶` and its derivative with respect to `ln s_m`.
fn shape(s: f64, ln_sm: f64, d: f64) -> (f64, f64) {
    let q = ((s.ln() - ln_sm) * d / 3.0).exp();
    if !q.is_finite() {
        return (0.0, 0.0);
    }
    let p = 1.0 + q;
    let phi = 64.0 * q.powi(3) / p.powi(6);
    (phi, -64.0 * d * q.powi(3) * (1.0 - q) / p.powi(7))
}

struct Problem<'a> {
    s: &'a [f64],
    y: Vec<f64>,
    d: f64,
}

impl Problem<'_> {
    /// Best amplitude for fixed `ln s_m` and the resulting squared error.
    fn profile(&self, ln_sm: f64) -> (f64, f64) {
        let (mut py, mut pp) = (0.0, 0.0);
        for (s, y) in self.s.iter().zip(&self.y) {
            let phi = shape(*s, ln_sm, self.d).0;
            py += phi * y;
            pp += phi * phi;
        }
        let a = if pp > 0.0 { py / pp } else { 0.0 };
        (a, self.cost(a, ln_sm))
    }

    fn cost(&self, a: f64, ln_sm: f64) -> f64 {
        self.s.iter().zip(&self.y).map(|(s, y)| (y - a * shape(*s, ln_sm, self.d).0).powi(2)).sum()
    }

    /// One damped Gauss-Newton step on `(a, ln s_m)`.
    fn gauss_newton(&self, a: f64, t: f64) -> Option<(f64, f64)> {
        let (mut jtj, mut jtr) = ([[0.0; 2]; 2], [0.0; 2]);
        for (s, y) in self.s.iter().zip(&self.y) {
            let (phi, dphi) = shape(*s, t, self.d);
            let r = y - a * phi;
            let j = [phi, a * dphi];
            for i in 0..2 {
                jtr[i] += j[i] * r;
                for k in 0..2 {
                    jtj[i][k] += j[i] * j[k];
                }
            }
        }
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if !(det.abs() > 0.0) {
            return None;
        }
        let da = (jtr[0] * jtj[1][1] - jtr[1] * jtj[0][1]) / det;
        let dt = (jtj[0][0] * jtr[1] - jtj[1][0] * jtr[0]) / det;
        let c0 = self.cost(a, t);
        let mut lambda = 1.0;
        while lambda > 1e-6 {
            let (a1, t1) = (a + lambda * da, t + lambda * dt);
            if self.cost(a1, t1) <= c0 {
                return Some((a1, t1));
            }
            lambda *= 0.5;
        }
        None
    }
}

/// Fits `A·64q³/(1+q)⁶`, `q = (s/s_m)^{d/3}`, to `intensity/normalization` by
/// least squares over `(A, s_m)`. `rho_scale` is `A·normalization`.
pub fn spectrum_compare(samples: &[SpectrumSample], d: f64, normalization: f64) -> Result<SpectrumFit, CosmoError> {
    if samples.len() < MIN_SPECTRUM_SAMPLES {
        return Err(CosmoError::InvalidParameter(format!(
            "need at least {MIN_SPECTRUM_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    if !(normalization > 0.0 && normalization.is_finite()) {
        return Err(CosmoError::InvalidParameter(format!("normalization must be positive, got {normalization}")));
    }
    if !(d > 0.0 && d.is_finite()) {
        return Err(CosmoError::InvalidParameter(format!("d must be positive, got {d}")));
    }
    samples.iter().try_for_each(SpectrumSample::validate)?;
    let s: Vec<f64> = samples.iter().map(|p| p.s).collect();
    let y: Vec<f64> = samples.iter().map(|p| p.intensity / normalization).collect();
    let (y_min, y_max) = y.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    if y_max - y_min <= 1e-12 * y_max.abs().max(f64::MIN_POSITIVE) {
        return Err(CosmoError::DegenerateFit("all intensities are equal".into()));
    }
    let problem = Problem { s: &s, y, d };

    let (ln_lo, ln_hi) = s.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v.ln()), hi.max(v.ln())));
    let span = (ln_hi - ln_lo).max(1.0);
    let (lo, hi) = (ln_lo - SCAN_MARGIN * span / d, ln_hi + SCAN_MARGIN * span / d);
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let best = (0..SCAN_POINTS)
        .map(|i| lo + step * i as f64)
        .map(|t| (t, problem.profile(t).1))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("scan grid is non-empty")
        .0;

    let (mut a, mut b) = (best - step, best + step);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut e = a + inv_phi * (b - a);
    for _ in 0..GOLDEN_ITERATIONS {
        if problem.profile(c).1 < problem.profile(e).1 {
            b = e;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        e = a + inv_phi * (b - a);
    }
    let mut t = 0.5 * (a + b);
    let mut amp = problem.profile(t).0;
    for _ in 0..NEWTON_ITERATIONS {
        match problem.gauss_newton(amp, t) {
            Some((a1, t1)) if (t1 - t).abs() > 1e-15 || (a1 - amp).abs() > 1e-15 * amp.abs() => {
                amp = a1;
                t = t1;
            }
            Some((a1, t1)) => {
                amp = a1;
                t = t1;
                break;
            }
            None => break,
        }
    }
    if !(amp > 0.0) {
        return Err(CosmoError::DegenerateFit(format!("fitted amplitude {amp} is not positive")));
    }
    let s_m = t.exp();
    let rms = (problem.cost(amp, t) / s.len() as f64).sqrt() / amp;
    let peak = samples.iter().max_by(|p, q| p.intensity.total_cmp(&q.intensity)).expect("samples are non-empty").s;
    Ok(SpectrumFit { d, s_m, rho_scale: amp * normalization, rms_residual: rms, peak_offset: (peak - s_m) / s_m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosmology::{log_grid, BigBang};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn synthetic(b: &BigBang, n: usize) -> Vec<SpectrumSample> {
        log_grid(b.s_m / 10.0, b.s_m * 10.0, n).into_iter().map(|s| SpectrumSample { s, intensity: b.density(s) }).collect()
    }

    #[test]
    fn self_fit_is_exact() {
        let b = BigBang::new(2.7, 3.5, 5.4).unwrap();
        let fit = spectrum_compare(&synthetic(&b, 60), 5.4, 1.0).unwrap();
        assert!(fit.rms_residual < 1e-10, "{fit:?}");
        assert!((fit.s_m - 2.7).abs() < 1e-9 && (fit.rho_scale - 3.5).abs() < 1e-9, "{fit:?}");
    }

    #[test]
    fn noise_level_is_recovered() {
        let b = BigBang::new(1.0, 1.0, 5.4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let noise = Normal::new(0.0, 0.01).unwrap();
        let samples: Vec<_> = synthetic(&b, 400)
            .into_iter()
            .map(|p| SpectrumSample { s: p.s, intensity: (p.intensity + noise.sample(&mut rng)).max(0.0) })
            .collect();
        let fit = spectrum_compare(&samples, 5.4, 1.0).unwrap();
        assert!((fit.rms_residual - 0.01).abs() < 0.002, "{fit:?}");
        assert!((fit.s_m - 1.0).abs() < 0.01);
    }

    #[test]
    fn normalization_scales_amplitude_only() {
        let b = BigBang::new(1.0, 5.0, 3.0).unwrap();
        let f1 = spectrum_compare(&synthetic(&b, 30), 3.0, 1.0).unwrap();
        let f2 = spectrum_compare(&synthetic(&b, 30), 3.0, 5.0).unwrap();
        assert!((f1.rho_scale - f2.rho_scale).abs() < 1e-9 && (f1.s_m - f2.s_m).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        let flat: Vec<_> = (1..=12).map(|i| SpectrumSample { s: i as f64, intensity: 2.0 }).collect();
        assert!(matches!(spectrum_compare(&flat, 5.4, 1.0), Err(CosmoError::DegenerateFit(_))));
        assert!(spectrum_compare(&flat[..5], 5.4, 1.0).is_err());
        let b = BigBang::new(1.0, 1.0, 5.4).unwrap();
        assert!(spectrum_compare(&synthetic(&b, 20), 5.4, 0.0).is_err());
        assert!(parse_spectrum("s,intensity\n1,2\n-1,3\n".as_bytes()).is_err());
        assert!(parse_spectrum("x,y\n1,2\n".as_bytes()).is_err());
        assert_eq!(parse_spectrum("# c\ns,intensity\n1,2\n".as_bytes()).unwrap().len(), 1);
    }
}
