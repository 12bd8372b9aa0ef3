use std::path::Path;

use heqvpe_core::integrals::IntegralsError;
use heqvpe_core::jw::JwError;
use heqvpe_core::photonic::PhotonicError;
use heqvpe_core::qsim::QsimError;
use heqvpe_core::vqe::VqeError;
use thiserror::Error;

/// Failure classes, one per exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn read(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("cannot read {}: {e}", path.display()))
    }

    pub fn write(path: &Path, e: std::io::Error) -> Self {
        CliError::Input(format!("cannot write {}: {e}", path.display()))
    }
}

impl From<IntegralsError> for CliError {
    fn from(e: IntegralsError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<JwError> for CliError {
    fn from(e: JwError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<QsimError> for CliError {
    fn from(e: QsimError) -> Self {
        match e {
            QsimError::NonHermitian(_) | QsimError::NotNormalized(_) => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<VqeError> for CliError {
    fn from(e: VqeError) -> Self {
        match e {
            VqeError::NonFinite { .. } => CliError::Numeric(e.to_string()),
            VqeError::Config(_) | VqeError::Theta0Length { .. } => CliError::Usage(e.to_string()),
            VqeError::Qsim(q) => q.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PhotonicError> for CliError {
    fn from(e: PhotonicError) -> Self {
        match e {
            PhotonicError::NotUnitary { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}
