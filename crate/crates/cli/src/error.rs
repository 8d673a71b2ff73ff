use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unknown demo '{0}' (available: {list})", list = crate::demo::DEMO_NAMES.join(", "))]
    UnknownDemo(String),

    #[error("query {index} ({op}): {source}")]
    Query {
        index: usize,
        op: String,
        #[source]
        source: beablekit::Error,
    },

    #[error(transparent)]
    Core(#[from] beablekit::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;
