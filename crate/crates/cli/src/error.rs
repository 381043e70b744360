use idealconv_core::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown ideal `{0}`")]
    UnknownIdeal(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Core(Error),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::UnsupportedCombination(s) => CliError::Unsupported(s),
            other => CliError::Core(other),
        }
    }
}

impl CliError {
    /// 2 for bad input, 3 for gaps in the decision tables.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Unsupported(_) => 3,
            _ => 2,
        }
    }
}
