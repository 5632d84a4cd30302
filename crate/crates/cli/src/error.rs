use thiserror::Error;

/// Anything that stops a command. Failed identity checks are not errors;
/// they are reported in the output and turned into exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Engine(#[from] ptilt_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for anything the user can fix in the configuration, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use ptilt_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Engine(
                E::Parse(_)
                | E::NotPrime(_)
                | E::UnsupportedPreset(_)
                | E::WeylCapExceeded { .. }
                | E::BadPrime { .. }
                | E::TorsionPrime { .. },
            ) => 2,
            _ => 1,
        }
    }
}
