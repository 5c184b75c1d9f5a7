//! Command implementations behind the `abscat` binary.
//!
//! Exit codes: 0 ok, 1 input error, 2 domain or regime error, 3 numerical
//! invariant failure (including failed verification), 4 degenerate data
//! (outputs are still written).

pub mod commands;
pub mod config;
pub mod io;

use abscat::Error;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Input(String),
    Io(String),
    Core(Error),
    /// Verification ran and at least one criterion did not pass.
    Failed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(e) => write!(f, "{}: {e}", error_name(e)),
            CliError::Failed(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

/// Variant name used in diagnostics.
pub fn error_name(e: &Error) -> &'static str {
    match e {
        Error::PoleError(_) => "PoleError",
        Error::RangeError(_) => "RangeError",
        Error::NonConvergence(_) => "NonConvergence",
        Error::InvalidInput(_) => "InvalidInput",
        Error::BlowUp { .. } => "BlowUp",
        Error::UnitarityViolation { .. } => "UnitarityViolation",
        Error::SolitonsPresent(_) => "SolitonsPresent",
        Error::ContourTooCoarse(_) => "ContourTooCoarse",
        Error::PoleAtZero => "PoleAtZero",
        Error::WrongRegime(_) => "WrongRegime",
        Error::NeutralOnContour => "NeutralOnContour",
        Error::OnCriticalPoint => "OnCriticalPoint",
        Error::ReflectionAtUnitModulus(_) => "ReflectionAtUnitModulus",
        Error::OnBand => "OnBand",
        Error::TooCloseToEndpoint(_) => "TooCloseToEndpoint",
        Error::ZeroReflectionAtPhasePoint => "ZeroReflectionAtPhasePoint",
        Error::FixedPointDivergence { .. } => "FixedPointDivergence",
        Error::StepTooLarge(_) => "StepTooLarge",
        Error::DomainEscape { .. } => "DomainEscape",
    }
}

pub fn exit_code(e: &CliError) -> i32 {
    match e {
        CliError::Input(_) | CliError::Io(_) => EXIT_INPUT,
        CliError::Failed(_) => EXIT_NUMERICAL,
        CliError::Core(e) => match e {
            Error::PoleError(_) | Error::RangeError(_) | Error::InvalidInput(_) => EXIT_INPUT,
            Error::SolitonsPresent(_)
            | Error::WrongRegime(_)
            | Error::PoleAtZero
            | Error::NeutralOnContour
            | Error::OnCriticalPoint
            | Error::OnBand
            | Error::TooCloseToEndpoint(_)
            | Error::ReflectionAtUnitModulus(_)
            | Error::FixedPointDivergence { .. }
            | Error::StepTooLarge(_)
            | Error::DomainEscape { .. } => EXIT_DOMAIN,
            Error::UnitarityViolation { .. } | Error::BlowUp { .. } | Error::NonConvergence(_) | Error::ContourTooCoarse(_) => {
                EXIT_NUMERICAL
            }
            Error::ZeroReflectionAtPhasePoint => EXIT_DEGENERATE,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_contract() {
        assert_eq!(exit_code(&CliError::Input("x".into())), 1);
        assert_eq!(exit_code(&Error::SolitonsPresent(1).into()), 2);
        assert_eq!(exit_code(&Error::WrongRegime(1.0).into()), 2);
        assert_eq!(exit_code(&Error::StepTooLarge("x".into()).into()), 2);
        assert_eq!(exit_code(&Error::DomainEscape { t: 1.0, amplitude: 1.0 }.into()), 2);
        assert_eq!(exit_code(&Error::FixedPointDivergence { iters: 1, residual: 1.0 }.into()), 2);
        assert_eq!(exit_code(&Error::UnitarityViolation { z: 1.0, defect: 1.0 }.into()), 3);
        assert_eq!(exit_code(&Error::ZeroReflectionAtPhasePoint.into()), 4);
        assert!(CliError::from(Error::WrongRegime(2.0)).to_string().starts_with("WrongRegime"));
    }
}
