//! Physical constants and conversions of masses and charges to lengths.

use std::f64::consts::PI;
use std::path::Path;

const BUNDLED: &str = include_str!("../../data/constants.txt");

const KEYS: [&str; 8] = ["G_g", "c", "eps0", "q", "m_p", "m_e", "hbar", "M_sun"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum UnitsError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing constant `{0}`")]
    Missing(&'static str),
    #[error("unknown constant `{0}`")]
    Unknown(String),
    #[error("constant `{0}` given twice")]
    Duplicate(String),
    #[error("constant `{key}` must be positive, got {value}")]
    NonPositive { key: String, value: f64 },
    #[error("cannot read constants file: {0}")]
    Io(String),
}

/// SI constants; loaded from a `key = value` file, never inlined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub g_g: f64,
    pub c: f64,
    pub eps0: f64,
    pub q: f64,
    pub m_p: f64,
    pub m_e: f64,
    pub hbar: f64,
    pub m_sun: f64,
}

impl PhysicalConstants {
    /// The constants file shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled constants file is valid")
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, UnitsError> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| UnitsError::Io(e.to_string()))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment. The key set must be exactly
    /// `G_g, c, eps0, q, m_p, m_e, hbar, M_sun`.
    pub fn parse(text: &str) -> Result<Self, UnitsError> {
        let mut values: [Option<f64>; 8] = [None; 8];
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UnitsError::Parse { line: i + 1, msg: "expected `key = value`".into() })?;
            let key = key.trim();
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|e| UnitsError::Parse { line: i + 1, msg: format!("bad number: {e}") })?;
            let slot = KEYS.iter().position(|k| *k == key).ok_or_else(|| UnitsError::Unknown(key.into()))?;
            if values[slot].is_some() {
                return Err(UnitsError::Duplicate(key.into()));
            }
            if !(value > 0.0) || !value.is_finite() {
                return Err(UnitsError::NonPositive { key: key.into(), value });
            }
            values[slot] = Some(value);
        }
        let get = |i: usize| values[i].ok_or(UnitsError::Missing(KEYS[i]));
        Ok(Self {
            g_g: get(0)?,
            c: get(1)?,
            eps0: get(2)?,
            q: get(3)?,
            m_p: get(4)?,
            m_e: get(5)?,
            hbar: get(6)?,
            m_sun: get(7)?,
        })
    }
}

/// `r_M = G_g M / c²` in metres for a mass in kilograms.
pub fn mass_to_length(mass_kg: f64, consts: &PhysicalConstants) -> f64 {
    consts.g_g * mass_kg / (consts.c * consts.c)
}

/// `r_c = q²/(4π ε₀ m c²)` in metres.
pub fn charge_radius(charge: f64, mass_kg: f64, consts: &PhysicalConstants) -> f64 {
    charge * charge / (4.0 * PI * consts.eps0 * mass_kg * consts.c * consts.c)
}

/// Ratio of electric to gravitational attraction between two protons,
/// `q²/(4π ε₀ G_g m_p²)`.
pub fn force_ratio(consts: &PhysicalConstants) -> f64 {
    consts.q * consts.q / (4.0 * PI * consts.eps0 * consts.g_g * consts.m_p * consts.m_p)
}

/// Atomic radius `r_a = ε₀ h²/(π m_e q²)` with Planck's constant `h = 2πħ`
/// (the Bohr radius).
pub fn atom_radius(consts: &PhysicalConstants) -> f64 {
    let h = 2.0 * PI * consts.hbar;
    consts.eps0 * h * h / (PI * consts.m_e * consts.q * consts.q)
}

/// Proton charge radius over atomic radius.
pub fn charge_to_atom_ratio(consts: &PhysicalConstants) -> f64 {
    charge_radius(consts.q, consts.m_p, consts) / atom_radius(consts)
}
