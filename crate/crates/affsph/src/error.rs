use affine_spheres::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute(e) => match e {
                Error::InvalidParameter(_)
                | Error::DomainViolation(_)
                | Error::BranchAmbiguity { .. }
                | Error::StencilOutOfDomain { .. }
                | Error::PoleProximity { .. } => 2,
                _ => 1,
            },
            CliError::Io(_) | CliError::ChecksFailed { .. } => 1,
        }
    }
}
