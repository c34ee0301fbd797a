use std::path::PathBuf;

use linbandit_core::Error as CoreError;

use crate::config::ValidationError;
use crate::io::InputError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Validation(#[from] ValidationError),
    #[error("{0}")]
    Input(#[from] InputError),
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) | RunError::Input(_) | RunError::Usage(_) => EXIT_VALIDATION,
            RunError::Write { .. } => EXIT_INVARIANT,
            RunError::Core(e) => core_exit_code(e),
        }
    }
}

/// Exit code for a library error: bad input, broken invariant or solver failure.
pub fn core_exit_code(e: &CoreError) -> i32 {
    match e.root() {
        CoreError::DesignNotConverged { .. } | CoreError::SupportTooLarge { .. } | CoreError::Singular(_) => EXIT_SOLVER,
        CoreError::Invariant(_) | CoreError::Protocol(_) | CoreError::OutsideSpan { .. } => EXIT_INVARIANT,
        _ => EXIT_VALIDATION,
    }
}

pub(crate) fn write_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> RunError {
    let path = path.into();
    move |source| RunError::Write { path, source }
}
