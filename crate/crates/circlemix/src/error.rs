use std::io;

use crate::schema::SchemaError;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Io = 1,
    Config = 2,
    Divergence = 3,
    Unsamplable = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("spec {0}")]
    Schema(#[from] SchemaError),
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Analysis(#[from] circlemix_core::Error),
}

impl CliError {
    pub fn exit_kind(&self) -> ExitKind {
        use circlemix_core::Error as E;
        match self {
            CliError::Io(_) => ExitKind::Io,
            CliError::Schema(_) | CliError::Config(_) => ExitKind::Config,
            CliError::Analysis(E::SeriesDiverges { .. }) => ExitKind::Divergence,
            CliError::Analysis(E::Unsamplable(_)) => ExitKind::Unsamplable,
            CliError::Analysis(_) => ExitKind::Config,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.exit_kind() as i32
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}
