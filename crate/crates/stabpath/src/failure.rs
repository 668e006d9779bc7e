//! Command failures and the exit-code contract.

use stabpath_core::Error;

/// Exit status of a finished command.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const INTERNAL: i32 = 1;
    /// Non-generic parameters: the mathematics is at a boundary case.
    pub const BOUNDARY: i32 = 2;
    pub const BAD_INPUT: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Boundary(String),
    #[error("{0}")]
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => exit::BAD_INPUT,
            Failure::Boundary(_) => exit::BOUNDARY,
            Failure::Internal(_) => exit::INTERNAL,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Failure::Input(msg.into())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidInput(_)
            | Error::InconsistentModel(_)
            | Error::Domain { .. }
            | Error::Unsupported(_)
            | Error::PairingInconsistent(_) => Failure::Input(msg),
            Error::Genericity { .. } | Error::NoEventualRegime | Error::SingularPath(_) => Failure::Boundary(msg),
            Error::NonConvergence { .. }
            | Error::Overflow { .. }
            | Error::StepUnderflow { .. }
            | Error::UndefinedRate
            | Error::BranchTracking { .. }
            | Error::ExponentMismatch { .. }
            | Error::NotEventuallyNonzero { .. }
            | Error::NotDirectSum(_)
            | Error::Internal(_) => Failure::Internal(msg),
        }
    }
}

/// Reading a user-supplied file failed.
pub fn read_error(path: &std::path::Path, e: impl std::fmt::Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

/// Writing an artifact failed.
pub fn write_error(path: &std::path::Path, e: impl std::fmt::Display) -> Failure {
    Failure::Internal(format!("writing {}: {e}", path.display()))
}

pub type CmdResult<T> = Result<T, Failure>;
