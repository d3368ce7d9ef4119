//! Subcommand implementations. Each returns the table to emit, an optional
//! summary line for stderr and, for checks, the reason it failed.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use clap::{ArgGroup, Args, ValueEnum};
use matfield::cosmology::{
    continuity_residual, fl_eigenvalues, load_spectrum, log_grid, spectrum_compare, standard_log_grid, BigBang,
};
use matfield::dynamics::ode::{Crossing, OdeOptions};
use matfield::dynamics::{
    bundled_planets, integrate_geodesic_with, load_planets, weak_energy, plane_orbit_velocity, planet_table,
    precession, radial_extremum, radial_velocity_weak, radial_velocity_schwarzschild, schwarzschild_energy,
    GeodesicOptions, GeodesicState, OrbitGeometry, OrbitSpec,
};
use matfield::geometry::{eval, identity_suite, ricci, riemann, sample_regular_points, MetricField};
use matfield::matcore::ColumnVector;
use matfield::metrics::{
    ConformalFactor, FlatFrameMetric, FlatFrameSpec, MaximallyUniform, OmegaTable, PhysicalConstants, Schwarzschild,
    WeakSpherical,
};
use matfield::tolerances;

use crate::catalog::{points, MetricArgs};
use crate::error::CliError;
use crate::output::{point_cell, Cell, Table};

pub struct Outcome {
    pub table: Table,
    pub summary: Option<String>,
    pub failure: Option<String>,
}

impl Outcome {
    fn table(table: Table) -> Self {
        Self { table, summary: None, failure: None }
    }
}

pub fn curvature(metric: &MetricArgs, explicit: &[String], grid: usize, seed: u64) -> Result<Outcome, CliError> {
    let selected = metric.select(seed)?;
    let field = selected.field.as_ref();
    let mut t = Table::new(&["point_index", "point", "quantity", "a", "b", "row", "col", "value"]);
    for (p, x) in points(field, explicit, grid, seed)?.iter().enumerate() {
        let b = ricci(field, x)?;
        let n = x.dim();
        let pc = point_cell(x.as_slice());
        let mut matrix = |name: &str, a: Option<usize>, bb: Option<usize>, m: &matfield::matcore::SquareMatrix| {
            for i in 0..n {
                for j in 0..n {
                    t.push(vec![
                        p.into(),
                        pc.clone(),
                        name.into(),
                        a.map(|v| v + 1).into(),
                        bb.map(|v| v + 1).into(),
                        (i + 1).into(),
                        (j + 1).into(),
                        m[(i, j)].into(),
                    ]);
                }
            }
        };
        let chr = &b.riemann.christoffel;
        matrix("metric", None, None, &chr.metric);
        for c in 0..n {
            matrix("gamma", Some(c), None, &chr.first_kind[c]);
        }
        for c in 0..n {
            matrix("sigma", Some(c), None, &chr.second_kind[c]);
        }
        for a in 0..n {
            for bb in a + 1..n {
                matrix("sigma_ab", Some(a), Some(bb), &b.riemann.sigma_ab[a][bb]);
            }
        }
        matrix("ricci", None, None, &b.ricci);
        t.push(vec![p.into(), pc.clone(), "scalar".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, b.scalar.into()]);
        for (i, mu) in b.eigen.values.iter().enumerate() {
            t.push(vec![p.into(), pc.clone(), "eigenvalue".into(), Cell::Empty, Cell::Empty, (i + 1).into(), Cell::Empty, (*mu).into()]);
        }
    }
    Ok(Outcome::table(t))
}

pub fn verify(
    metric: &MetricArgs,
    explicit: &[String],
    grid: usize,
    seed: u64,
    expect_rho: Option<f64>,
    tol: f64,
) -> Result<Outcome, CliError> {
    let selected = metric.select(seed)?;
    let field = selected.field.as_ref();
    let expectation = match expect_rho {
        Some(rho) => crate::catalog::Expectation::Proportional(rho),
        None => selected.expectation,
    };
    let mut t = Table::new(&["point_index", "point", "rho_numeric", "rho_expected", "residual", "passed"]);
    let pts = points(field, explicit, grid, seed)?;
    let mut worst = 0.0_f64;
    let mut failed = 0;
    for (p, x) in pts.iter().enumerate() {
        let b = ricci(field, x)?;
        let g = b.metric();
        let expected = expectation.matrix(g, x)?;
        let residual = (&b.ricci - &expected).norm_inf() / (1.0 + b.ricci.norm_inf());
        let passed = residual < tol;
        worst = worst.max(residual);
        failed += usize::from(!passed);
        let rho_numeric = b.scalar / g.dim() as f64;
        t.push(vec![p.into(), point_cell(x.as_slice()), rho_numeric.into(), expectation.rho().into(), residual.into(), passed.into()]);
    }
    let target = match expectation.rho() {
        Some(rho) => format!("R = {rho:?} g"),
        None => "perfect-fluid R".to_string(),
    };
    let summary = format!("verify {}: {target}, {} of {} points pass, max residual {worst:e} (tol {tol:e})", field.name(), pts.len() - failed, pts.len());
    Ok(Outcome { table: t, failure: (failed > 0).then(|| summary.clone()), summary: Some(summary) })
}

pub fn identities(metric: &MetricArgs, explicit: &[String], grid: usize, seed: u64) -> Result<Outcome, CliError> {
    let selected = metric.select(seed)?;
    let field = selected.field.as_ref();
    let mut t = Table::new(&["point_index", "point", "check", "max_violation", "tolerance", "passed"]);
    let mut failed = 0;
    let mut total = 0;
    for (p, x) in points(field, explicit, grid, seed)?.iter().enumerate() {
        let report = identity_suite(field, x)?;
        for c in &report.checks {
            total += 1;
            failed += usize::from(!c.passed);
            t.push(vec![p.into(), point_cell(x.as_slice()), c.name.into(), c.max_violation.into(), c.tolerance.into(), c.passed.into()]);
        }
    }
    let summary = format!("identities {}: {} of {total} checks pass", field.name(), total - failed);
    Ok(Outcome { table: t, failure: (failed > 0).then(|| summary.clone()), summary: Some(summary) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrbitMetric {
    Weak,
    Schwarzschild,
}

#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    /// Perihelion radius.
    #[arg(long)]
    pub p: f64,
    /// Aphelion radius.
    #[arg(long)]
    pub a: f64,
    #[arg(long = "rM")]
    pub r_m: f64,
    #[arg(long, value_enum, default_value_t = OrbitMetric::Weak)]
    pub geometry: OrbitMetric,
    #[arg(long, default_value_t = 1)]
    pub revolutions: u32,
    #[arg(long, default_value_t = 1e-10)]
    pub rtol: f64,
    /// Emit every n-th accepted state (the last state is always emitted).
    #[arg(long, default_value_t = 1)]
    pub every: usize,
}

pub fn orbit(args: &OrbitArgs) -> Result<Outcome, CliError> {
    if args.revolutions == 0 || args.every == 0 || !(args.rtol > 0.0) {
        return Err(CliError::Usage("--revolutions, --every and --rtol must be positive".into()));
    }
    let spec = OrbitSpec::new(args.p, args.a, args.r_m)?;
    let (field, geometry): (Box<dyn MetricField>, OrbitGeometry) = match args.geometry {
        OrbitMetric::Weak => (Box::new(WeakSpherical::new(spec.r_m, 0.0, 1.0)?), OrbitGeometry::Weak),
        OrbitMetric::Schwarzschild => (Box::new(Schwarzschild::new(spec.r_m)?), OrbitGeometry::Schwarzschild),
    };
    let u0 = plane_orbit_velocity(&spec, spec.p, geometry, true)?;
    let start = GeodesicState::new(ColumnVector::from([FRAC_PI_2, 0.0, spec.p, 0.0]), u0, 0.0);
    let ode = OdeOptions { rtol: args.rtol, atol: args.rtol * 1e-2, ..OdeOptions::default() };
    let semi_major = 0.5 * (spec.p + spec.a);
    let kepler_period = 2.0 * PI * (semi_major.powi(3) / spec.r_m).sqrt();
    let one = GeodesicOptions { ode, force: None, stop_on_velocity_zero: Some((2, Crossing::Rising)) };
    let first = integrate_geodesic_with(field.as_ref(), &start, 10.0 * kepler_period, &one)?;
    if let Some(reason) = first.truncation_reason() {
        return Err(CliError::Domain(format!("integration stopped early: {reason}")));
    }
    let rev_tau = first.last().tau;
    let advance = first.last().x[1] - 2.0 * PI;
    let run = if args.revolutions == 1 {
        first
    } else {
        let long = GeodesicOptions { ode, force: None, stop_on_velocity_zero: None };
        let run = integrate_geodesic_with(field.as_ref(), &start, f64::from(args.revolutions) * rev_tau, &long)?;
        if let Some(reason) = run.truncation_reason() {
            return Err(CliError::Domain(format!("integration stopped early: {reason}")));
        }
        run
    };
    let mut t = Table::new(&["tau", "x1", "x2", "x3", "x4", "u1", "u2", "u3", "u4", "normalization_error"]);
    let last = run.states.len() - 1;
    for (i, s) in run.states.iter().enumerate() {
        if i % args.every != 0 && i != last {
            continue;
        }
        let mut row: Vec<Cell> = vec![s.tau.into()];
        row.extend(s.x.as_slice().iter().map(|v| Cell::from(*v)));
        row.extend(s.u.as_slice().iter().map(|v| Cell::from(*v)));
        row.push((s.normalization(field.as_ref())? - 1.0).into());
        t.push(row);
    }
    let drift = run.max_normalization_drift;
    let closed = precession(&spec)?;
    let summary = format!(
        "orbit {}: {} accepted steps, max |u^T g u - 1| = {drift:e}; perihelion advance {advance:e} rad/rev (closed form {closed:e})",
        field.name(),
        run.accepted_steps
    );
    let failure = (drift >= tolerances::GEODESIC_NORMALIZATION).then(|| summary.clone());
    Ok(Outcome { table: t, summary: Some(summary), failure })
}

pub fn planets(planets: Option<&Path>, constants: Option<&Path>) -> Result<Outcome, CliError> {
    let records = match planets {
        Some(path) => load_planets(path)?,
        None => bundled_planets(),
    };
    let consts = match constants {
        Some(path) => PhysicalConstants::from_file(path)?,
        None => PhysicalConstants::bundled(),
    };
    let mut t = Table::new(&[
        "name",
        "dphi_per_rev_arcsec",
        "dphi_per_century_arcsec",
        "v_min_km_s",
        "v_max_km_s",
        "status",
    ]);
    for row in planet_table(&records, &consts) {
        t.push(vec![
            row.name.into(),
            row.dphi_per_rev_arcsec.into(),
            row.dphi_per_century_arcsec.into(),
            row.v_min_km_s.into(),
            row.v_max_km_s.into(),
            row.status.into(),
        ]);
    }
    Ok(Outcome::table(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RadialGeometry {
    Schwarzschild,
    Weak,
    Both,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("start").required(true).args(["from_rest_at_infinity", "y30"])))]
pub struct RadialArgs {
    #[arg(long, value_enum, default_value_t = RadialGeometry::Both)]
    pub geometry: RadialGeometry,
    #[arg(long = "rM")]
    pub r_m: f64,
    /// Start at rest at infinity.
    #[arg(long)]
    pub from_rest_at_infinity: bool,
    /// Starting radius.
    #[arg(long)]
    pub y30: Option<f64>,
    /// Signed radial velocity at --y30 (negative inward).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub beta30: f64,
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Outer end of the profile; defaults to --y30, or 1000 rM from infinity.
    #[arg(long)]
    pub rmax: Option<f64>,
}

pub fn radial(args: &RadialArgs) -> Result<Outcome, CliError> {
    let r = args.r_m;
    if !(r > 0.0) {
        return Err(CliError::Domain(format!("rM must be positive, got {r}")));
    }
    if args.grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".into()));
    }
    let (y30, beta30) = if args.from_rest_at_infinity { (f64::INFINITY, 0.0) } else { (args.y30.unwrap_or(f64::NAN), args.beta30) };
    let lo = 2.0 * r * (1.0 + 1e-6);
    let hi = args.rmax.unwrap_or(if y30.is_finite() { y30 } else { 1e3 * r }).min(y30);
    if !(hi > lo) {
        return Err(CliError::Domain(format!("profile range ({lo}, {hi}) is empty")));
    }
    let with_schw = args.geometry != RadialGeometry::Weak;
    let with_weak = args.geometry != RadialGeometry::Schwarzschild;
    let c4 = if with_schw { Some(schwarzschild_energy(y30, beta30, r)?) } else { None };
    if with_weak {
        weak_energy(y30, beta30, r)?;
    }
    let mut t = Table::new(&["y3", "beta3_schwarzschild", "beta3_weak"]);
    for y in log_grid(lo, hi, args.grid) {
        let schw = c4.map(|c4| radial_velocity_schwarzschild(y, c4, r).map(|b| -b)).transpose()?;
        let weak = if with_weak { Some(radial_velocity_weak(y, y30, beta30, r)?) } else { None };
        t.push(vec![y.into(), schw.into(), weak.into()]);
    }
    let summary = c4.and_then(|c4| radial_extremum(c4, r).ok()).map(|e| {
        format!("radial: Schwarzschild extreme speed |beta3| = {:?} at y3 = {:?}", e.beta3m, e.y3m)
    });
    Ok(Outcome { table: t, summary, failure: None })
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("model").required(true).args(["bigbang", "uniform", "spectrum"])))]
pub struct CosmoArgs {
    /// Big Bang solution with --d, --sm, --rhom; the curve always includes the peak `s = sm`.
    #[arg(long)]
    pub bigbang: bool,
    /// Maximally uniform solution with --rho.
    #[arg(long)]
    pub uniform: bool,
    /// Fit the Big Bang curve (exponent --d) to an `s,intensity` CSV.
    #[arg(long)]
    pub spectrum: Option<std::path::PathBuf>,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub sm: Option<f64>,
    #[arg(long)]
    pub rhom: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Intensities are divided by this before fitting.
    #[arg(long, default_value_t = 1.0)]
    pub normalization: f64,
    #[arg(long, default_value_t = 100)]
    pub grid: usize,
    #[arg(long)]
    pub smin: Option<f64>,
    #[arg(long)]
    pub smax: Option<f64>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("cosmo needs --{flag}")))
}

/// Curve of `f`, `ρ` and the eigenvalues; the continuity residual only when
/// `rho` is the density paired with `factor` by the continuity equation.
fn cosmo_curve<F: ConformalFactor>(
    factor: &F,
    rho: impl Fn(f64) -> f64,
    paired: bool,
    grid: &[f64],
) -> Result<(Table, f64), CliError> {
    let mut t = Table::new(&["s", "f", "density", "mu1", "mu4", "continuity_residual"]);
    let mut worst = 0.0_f64;
    for &s in grid {
        let mu = fl_eigenvalues(factor, s)?;
        let residual = if paired { Some(continuity_residual(factor, &rho, s)?) } else { None };
        worst = worst.max(residual.map_or(0.0, f64::abs));
        t.push(vec![s.into(), factor.f(s).into(), rho(s).into(), mu.mu1.into(), mu.mu4.into(), residual.into()]);
    }
    Ok((t, worst))
}

pub fn cosmo(args: &CosmoArgs) -> Result<Outcome, CliError> {
    if let Some(path) = &args.spectrum {
        let samples = load_spectrum(path)?;
        let fit = spectrum_compare(&samples, need(args.d, "d")?, args.normalization)?;
        let mut t = Table::new(&["d", "s_m", "rho_scale", "rms_residual", "peak_offset"]);
        t.push(vec![fit.d.into(), fit.s_m.into(), fit.rho_scale.into(), fit.rms_residual.into(), fit.peak_offset.into()]);
        return Ok(Outcome::table(t));
    }
    if args.grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let range = |lo: f64, hi: f64| -> Result<Vec<f64>, CliError> {
        let (lo, hi) = (args.smin.unwrap_or(lo), args.smax.unwrap_or(hi));
        if !(lo > 0.0 && hi > lo) {
            return Err(CliError::Domain(format!("need 0 < smin < smax, got {lo}, {hi}")));
        }
        Ok(log_grid(lo, hi, args.grid))
    };
    if args.bigbang {
        let b = BigBang::new(need(args.sm, "sm")?, need(args.rhom, "rhom")?, need(args.d, "d")?)?;
        let standard = standard_log_grid(b.s_m);
        let mut grid = range(standard[0], standard[standard.len() - 1])?;
        if grid[0] < b.s_m && b.s_m < grid[grid.len() - 1] && !grid.contains(&b.s_m) {
            let at = grid.partition_point(|s| *s < b.s_m);
            grid.insert(at, b.s_m);
        }
        let (t, worst) = cosmo_curve(&b, |s| b.density(s), true, &grid)?;
        let summary = format!(
            "cosmo bigbang: density({:?}) = {:?}; max continuity residual {worst:e}",
            b.s_m,
            b.density(b.s_m)
        );
        let failure = (worst >= tolerances::CONTINUITY_RESIDUAL).then(|| summary.clone());
        return Ok(Outcome { table: t, summary: Some(summary), failure });
    }
    let rho = need(args.rho, "rho")?;
    let factor = MaximallyUniform::from_density(rho);
    let hi = (0.9 * factor.horizon()).min(50.0);
    let (t, _) = cosmo_curve(&factor, |_| rho, false, &range(hi / 1000.0, hi)?)?;
    Ok(Outcome { table: t, summary: Some(format!("cosmo uniform: rho = {rho:?}")), failure: None })
}

pub fn flatdemo(dim: usize, grid: usize, seed: u64) -> Result<Outcome, CliError> {
    if grid == 0 {
        return Err(CliError::Usage("--grid must be positive".into()));
    }
    let spec = FlatFrameSpec::random(dim, seed)?;
    let metric = FlatFrameMetric::new(spec.clone());
    let (t_min, t_max) = metric.sample_box()[spec.k];
    let drift = OmegaTable::build(&spec, t_min.min(0.0), t_max.max(0.0)).max_drift();
    let mut t = Table::new(&["point_index", "point", "frame_det", "max_sigma_norm", "passed"]);
    let mut worst = 0.0_f64;
    for (p, x) in sample_regular_points(&metric, grid, seed)?.iter().enumerate() {
        let norm = riemann(&metric, x)?.max_sigma_norm();
        worst = worst.max(norm);
        let det = eval(&metric, x)?.det().abs().sqrt();
        t.push(vec![p.into(), point_cell(x.as_slice()), det.into(), norm.into(), (norm < tolerances::FLAT_CURVATURE).into()]);
    }
    let summary = format!(
        "flatdemo {}: max |sigma^ab| {worst:e} (tol {:e}), Omega orthogonality drift {drift:e} (tol {:e})",
        metric.name(),
        tolerances::FLAT_CURVATURE,
        tolerances::FRAME_ORTHOGONALITY
    );
    let ok = worst < tolerances::FLAT_CURVATURE && drift < tolerances::FRAME_ORTHOGONALITY;
    Ok(Outcome { table: t, failure: (!ok).then(|| summary.clone()), summary: Some(summary) })
}
