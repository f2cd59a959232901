use fluxtube::Error as CoreError;
use thiserror::Error;

/// Exit codes: 0 success, 2 config error, 3 infeasible/oversized model,
/// 4 numerical non-convergence, 1 everything else.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(core) => match core {
                CoreError::InfeasibleCharges(_)
                | CoreError::DimensionExceeded { .. }
                | CoreError::EmptySector
                | CoreError::SeparationTooLarge { .. }
                | CoreError::ChargeOutOfRange { .. } => 3,
                CoreError::NoConvergence { .. }
                | CoreError::FitDiverged(_)
                | CoreError::AmbiguousFrequency { .. } => 4,
                CoreError::BadDimensionality(_)
                | CoreError::BadExtent(_)
                | CoreError::BoundaryMismatch { .. }
                | CoreError::BadCoupling(_)
                | CoreError::InsufficientSamples { .. }
                | CoreError::InvalidInput(_) => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}
