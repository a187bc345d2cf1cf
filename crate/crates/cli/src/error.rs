use surface_ym::Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("{0}")]
    NoConvergence(Error),

    #[error("{0}")]
    Precondition(Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io(_) => 1,
            CliError::NoConvergence(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. } => CliError::NoConvergence(e),
            Error::AdNotCentral { .. }
            | Error::NotOnLevelSet { .. }
            | Error::CutLocus { .. }
            | Error::UnsupportedGroup(_)
            | Error::RelatorNotPreserved
            | Error::NotACocycle { .. } => CliError::Precondition(e),
            Error::SpecMismatch { .. }
            | Error::InvalidGenus(_)
            | Error::LengthMismatch { .. }
            | Error::NonCentralCharge { .. }
            | Error::ChartViolation { .. }
            | Error::Invalid(_) => CliError::Input(e.to_string()),
        }
    }
}
