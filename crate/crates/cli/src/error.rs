//! CLI errors rendered as a single `ERROR:<code>: message` line.

use std::fmt;

use matfield::cosmology::CosmoError;
use matfield::dynamics::DynamicsError;
use matfield::geometry::GeometryError;
use matfield::metrics::units::UnitsError;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or flag combinations.
    Usage(String),
    /// Parameters or points outside a model's domain.
    Domain(String),
    /// Malformed input files.
    Data(String),
    Io(String),
    /// A verification ran and did not pass.
    Check(String),
}

impl CliError {
    pub fn io(e: impl fmt::Display) -> Self {
        CliError::Io(e.to_string())
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Domain(_) => "domain",
            CliError::Data(_) => "data",
            CliError::Io(_) => "io",
            CliError::Check(_) => "check",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Check(_) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Data(m) | CliError::Io(m) | CliError::Check(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_line = self.message().split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "ERROR:{}: {one_line}", self.code())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Data(m) => CliError::Data(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<CosmoError> for CliError {
    fn from(e: CosmoError) -> Self {
        match e {
            CosmoError::Data(m) => CliError::Data(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<UnitsError> for CliError {
    fn from(e: UnitsError) -> Self {
        CliError::Data(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_on_one_line() {
        let e = CliError::Domain("bad\npoint  here".into());
        assert_eq!(e.to_string(), "ERROR:domain: bad point here");
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::Check("x".into()).exit_code(), 1);
    }
}
