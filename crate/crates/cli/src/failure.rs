use std::fmt;
use std::path::Path;

/// A command failure with its exit code and the pipeline stage it came from.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub stage: &'static str,
    pub error: anyhow::Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:#}", self.stage, self.error)
    }
}

pub type Outcome<T> = Result<T, Failure>;

pub trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> StageExt<T> for Result<T, E> {
    fn stage(self, stage: &'static str) -> Outcome<T> {
        self.map_err(|e| Failure {
            code: 1,
            stage,
            error: e.into(),
        })
    }
}

pub fn fail(stage: &'static str, message: impl fmt::Display) -> Failure {
    Failure {
        code: 1,
        stage,
        error: anyhow::anyhow!("{message}"),
    }
}

/// Exit code 2 when an input file is missing.
pub fn require_file(path: &Path, what: &str, stage: &'static str) -> Outcome<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            stage,
            error: anyhow::anyhow!("{what} not found: {}", path.display()),
        })
    }
}
