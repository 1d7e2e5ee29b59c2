use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("empty data: {0}")]
    EmptyData(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("training diverged at epoch {0}")]
    Diverged(usize),

    #[error("zero variance in {0}")]
    ZeroVariance(&'static str),

    #[error("insufficient data: need at least {needed} pairs, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("division by zero: {0} has a zero total")]
    DivisionByZero(String),

    #[error("correlating {left} with {right}: {source}")]
    Pair {
        left: String,
        right: String,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("model field `{field}`: {msg}")]
    Model { field: String, msg: String },

    #[error("unsupported model version `{0}`")]
    Version(String),

    #[error("rule file line {line}: {msg}")]
    Rule { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn model(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Model {
            field: field.into(),
            msg: msg.into(),
        }
    }

    /// True for errors caused by the input data rather than by configuration.
    pub fn is_data_error(&self) -> bool {
        match self {
            Error::EmptyData(_)
            | Error::ZeroVariance(_)
            | Error::NonFinite(_)
            | Error::InsufficientData { .. }
            | Error::DivisionByZero(_)
            | Error::Parse { .. } => true,
            Error::Pair { source, .. } => source.is_data_error(),
            _ => false,
        }
    }
}
