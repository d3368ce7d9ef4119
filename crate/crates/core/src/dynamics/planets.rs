//! Planet records and the precession / extreme-velocity table.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::metrics::units::mass_to_length;
use crate::metrics::PhysicalConstants;

use super::orbit::{extreme_velocities, precession, OrbitSpec, ARCSEC_PER_RADIAN};
use super::DynamicsError;

const BUNDLED: &str = include_str!("../../data/planets.csv");

/// Days per Julian century.
pub const DAYS_PER_CENTURY: f64 = 36_525.0;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PlanetRecord {
    pub name: String,
    pub perihelion_km: f64,
    pub aphelion_km: f64,
    pub period_days: f64,
}

impl PlanetRecord {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let all_positive = [self.perihelion_km, self.aphelion_km, self.period_days].iter().all(|v| v.is_finite() && *v > 0.0);
        if !all_positive {
            return Err(DynamicsError::InvalidOrbit(format!("{}: distances and period must be positive", self.name)));
        }
        if self.perihelion_km > self.aphelion_km {
            return Err(DynamicsError::InvalidOrbit(format!("{}: perihelion exceeds aphelion", self.name)));
        }
        Ok(())
    }
}

/// Reads `name,perihelion_km,aphelion_km,period_days` CSV; `#` lines are comments.
pub fn parse_planets<R: Read>(reader: R) -> Result<Vec<PlanetRecord>, DynamicsError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers().map_err(|e| DynamicsError::Data(e.to_string()))?.clone();
    let expected = ["name", "perihelion_km", "aphelion_km", "period_days"];
    if !headers.is_empty() && headers.iter().ne(expected) {
        return Err(DynamicsError::Data(format!("expected header {}, got {}", expected.join(","), headers.iter().collect::<Vec<_>>().join(","))));
    }
    rdr.deserialize().map(|r| r.map_err(|e| DynamicsError::Data(e.to_string()))).collect()
}

pub fn load_planets(path: impl AsRef<Path>) -> Result<Vec<PlanetRecord>, DynamicsError> {
    let file = std::fs::File::open(path.as_ref()).map_err(|e| DynamicsError::Data(format!("{}: {e}", path.as_ref().display())))?;
    parse_planets(file)
}

/// The NASA fact-sheet records shipped with the crate.
pub fn bundled_planets() -> Vec<PlanetRecord> {
    parse_planets(BUNDLED.as_bytes()).expect("bundled planets file is valid")
}

/// One table row; numeric fields are `None` when `status` is not `"ok"`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanetRow {
    pub name: String,
    pub dphi_per_rev_arcsec: Option<f64>,
    pub dphi_per_century_arcsec: Option<f64>,
    pub v_min_km_s: Option<f64>,
    pub v_max_km_s: Option<f64>,
    pub status: String,
}

fn row(rec: &PlanetRecord, r_m_km: f64, c_km_s: f64) -> Result<PlanetRow, DynamicsError> {
    rec.validate()?;
    let spec = OrbitSpec::new(rec.perihelion_km, rec.aphelion_km, r_m_km)?;
    let per_rev = precession(&spec)? * ARCSEC_PER_RADIAN;
    let v = extreme_velocities(&spec)?;
    Ok(PlanetRow {
        name: rec.name.clone(),
        dphi_per_rev_arcsec: Some(per_rev),
        dphi_per_century_arcsec: Some(per_rev * DAYS_PER_CENTURY / rec.period_days),
        v_min_km_s: Some(v.beta_min * c_km_s),
        v_max_km_s: Some(v.beta_max * c_km_s),
        status: "ok".into(),
    })
}

/// Precession (arcsec per revolution and per century) and extreme transverse
/// speeds (km/s) about the Sun. Failures are reported per row.
pub fn planet_table(records: &[PlanetRecord], consts: &PhysicalConstants) -> Vec<PlanetRow> {
    let r_m_km = mass_to_length(consts.m_sun, consts) / 1e3;
    let c_km_s = consts.c / 1e3;
    records
        .iter()
        .map(|rec| {
            row(rec, r_m_km, c_km_s).unwrap_or_else(|e| PlanetRow {
                name: rec.name.clone(),
                dphi_per_rev_arcsec: None,
                dphi_per_century_arcsec: None,
                v_min_km_s: None,
                v_max_km_s: None,
                status: format!("error: {e}"),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_has_nine_planets() {
        let p = bundled_planets();
        assert_eq!(p.len(), 9);
        assert_eq!(p[0].name, "Mercury");
        assert!(p.iter().all(|r| r.validate().is_ok()));
    }

    #[test]
    fn bad_rows_do_not_abort_the_table() {
        let csv = "name,perihelion_km,aphelion_km,period_days\nA,2e6,1e6,10\nB,1e6,2e6,10\n";
        let rows = planet_table(&parse_planets(csv.as_bytes()).unwrap(), &PhysicalConstants::bundled());
        assert!(rows[0].status.starts_with("error"));
        assert_eq!(rows[1].status, "ok");
    }

    #[test]
    fn empty_and_malformed_input() {
        assert!(parse_planets("name,perihelion_km,aphelion_km,period_days\n".as_bytes()).unwrap().is_empty());
        assert!(parse_planets("".as_bytes()).unwrap().is_empty());
        assert!(parse_planets("a,b\n1,2\n".as_bytes()).is_err());
        assert!(parse_planets("name,perihelion_km,aphelion_km,period_days\nX,1,oops,3\n".as_bytes()).is_err());
    }
}
