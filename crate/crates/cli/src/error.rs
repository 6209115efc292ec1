use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad config, input file or parameter. Exit code 2.
    #[error("{0}")]
    Validation(String),
    /// The job ran and its report was written, but a check failed. Exit code 3.
    #[error("verification failed: {0}")]
    Verification(String),
    /// Could not write output. Exit code 2, like any unusable argument.
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Io(_) | CliError::Validation(_) => ExitCode::from(2),
            CliError::Verification(_) => ExitCode::from(3),
        }
    }
}

impl From<eqm_core::Error> for CliError {
    fn from(e: eqm_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}
