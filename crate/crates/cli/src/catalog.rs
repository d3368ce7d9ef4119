//! Metric selection from command-line parameters.

use clap::{Args, ValueEnum};
use matfield::cosmology::{fl_ricci_closed_form, BigBang};
use matfield::geometry::{sample_regular_points, MetricField};
use matfield::matcore::{ColumnVector, SquareMatrix};
use matfield::metrics::{
    FlatFrameMetric, FlatFrameSpec, FriedmannLobachevsky, G33Profile, GeneralSpherical, GeneralWeak, MaximallyUniform,
    Minkowski, RectilinearSpherical, Schwarzschild, SphericalSolutionParams, WeakSpherical,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricName {
    Minkowski,
    Schwarzschild,
    Weak,
    GeneralSpherical,
    Rectilinear,
    GeneralWeak,
    FlUniform,
    FlBigbang,
    FlatFrame,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[arg(long, value_enum)]
    pub metric: MetricName,
    /// Central mass as a length.
    #[arg(long = "rM")]
    pub r_m: Option<f64>,
    #[arg(long)]
    pub c5: Option<f64>,
    /// Central-mass constant; defaults to 3 rM.
    #[arg(long)]
    pub c6: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub c7: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c8: f64,
    /// Density of general-weak and fl-uniform.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Constant g33 of general-weak.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub g33: f64,
    #[arg(long)]
    pub d: Option<f64>,
    #[arg(long)]
    pub sm: Option<f64>,
    #[arg(long)]
    pub rhom: Option<f64>,
    /// Dimension of minkowski and flat-frame.
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
}

/// What `R` should equal for a catalog metric.
pub enum Expectation {
    /// `R = ρg`.
    Proportional(f64),
    /// Perfect-fluid form of the Big Bang solution.
    BigBang(BigBang),
}

impl Expectation {
    pub fn matrix(&self, g: &SquareMatrix, x: &ColumnVector) -> Result<SquareMatrix, CliError> {
        match self {
            Expectation::Proportional(rho) => Ok(g.scale(*rho)),
            Expectation::BigBang(b) => Ok(fl_ricci_closed_form(b, x)?),
        }
    }

    pub fn rho(&self) -> Option<f64> {
        match self {
            Expectation::Proportional(rho) => Some(*rho),
            Expectation::BigBang(_) => None,
        }
    }
}

pub struct Selected {
    pub field: Box<dyn MetricField>,
    pub expectation: Expectation,
}

fn required(v: Option<f64>, flag: &str, metric: &str) -> Result<f64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--metric {metric} needs --{flag}")))
}

impl MetricArgs {
    pub fn select(&self, seed: u64) -> Result<Selected, CliError> {
        let name = self.metric.to_possible_value().expect("no skipped variants").get_name().to_string();
        let spherical = || -> Result<SphericalSolutionParams, CliError> {
            let c6 = match (self.c6, self.r_m) {
                (Some(c6), _) => c6,
                (None, Some(r)) => 3.0 * r,
                (None, None) => return Err(CliError::Usage(format!("--metric {name} needs --c6 or --rM"))),
            };
            Ok(SphericalSolutionParams::new(self.c5.unwrap_or(0.0), c6, self.c7, self.c8)?)
        };
        let (field, expectation): (Box<dyn MetricField>, Expectation) = match self.metric {
            MetricName::Minkowski => (Box::new(Minkowski::new(self.dim)), Expectation::Proportional(0.0)),
            MetricName::Schwarzschild => {
                (Box::new(Schwarzschild::new(required(self.r_m, "rM", &name)?)?), Expectation::Proportional(0.0))
            }
            MetricName::Weak => (
                Box::new(WeakSpherical::new(required(self.r_m, "rM", &name)?, self.c7, self.c8)?),
                Expectation::Proportional(3.0 * self.c7),
            ),
            MetricName::GeneralSpherical => {
                (Box::new(GeneralSpherical::new(spherical()?)), Expectation::Proportional(3.0 * self.c7))
            }
            MetricName::Rectilinear => {
                (Box::new(RectilinearSpherical::new(spherical()?)), Expectation::Proportional(3.0 * self.c7))
            }
            MetricName::GeneralWeak => {
                let rho = self.rho.unwrap_or(0.0);
                let field = GeneralWeak::new(G33Profile::Constant(self.g33), required(self.r_m, "rM", &name)?, rho, self.c8)?;
                (Box::new(field), Expectation::Proportional(rho))
            }
            MetricName::FlUniform => {
                let rho = required(self.rho, "rho", &name)?;
                (Box::new(FriedmannLobachevsky::new(MaximallyUniform::from_density(rho))), Expectation::Proportional(rho))
            }
            MetricName::FlBigbang => {
                let b = BigBang::new(required(self.sm, "sm", &name)?, required(self.rhom, "rhom", &name)?, required(self.d, "d", &name)?)?;
                (Box::new(FriedmannLobachevsky::new(b)), Expectation::BigBang(b))
            }
            MetricName::FlatFrame => {
                (Box::new(FlatFrameMetric::new(FlatFrameSpec::random(self.dim, seed)?)), Expectation::Proportional(0.0))
            }
        };
        Ok(Selected { field, expectation })
    }
}

/// Parses `a,b,c,d`.
pub fn parse_point(text: &str) -> Result<ColumnVector, CliError> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if !v.is_empty() && v.iter().all(|c| c.is_finite()) => Ok(ColumnVector::from(v)),
        _ => Err(CliError::Usage(format!("cannot parse point `{text}`; expected comma-separated numbers"))),
    }
}

/// Explicit `--point`s, or `grid` seeded regular points.
pub fn points(field: &dyn MetricField, explicit: &[String], grid: usize, seed: u64) -> Result<Vec<ColumnVector>, CliError> {
    if !explicit.is_empty() {
        return explicit.iter().map(|p| parse_point(p)).collect();
    }
    if grid == 0 {
        return Err(CliError::Usage("need --point or --grid >= 1".into()));
    }
    Ok(sample_regular_points(field, grid, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points() {
        assert_eq!(parse_point("0.5, 0,10,-1").unwrap().as_slice(), &[0.5, 0.0, 10.0, -1.0]);
        assert!(matches!(parse_point("1,x"), Err(CliError::Usage(_))));
        assert!(matches!(parse_point("1,nan"), Err(CliError::Usage(_))));
    }
}
