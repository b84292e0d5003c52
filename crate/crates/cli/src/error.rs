use ljmse_core::syntax::ParseError;
use ljmse_core::typing::TypeError;
use serde_json::{json, Value};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    /// An input the command cannot act on, e.g. a co-term given to `translate`.
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 3,
            CliError::Parse(_) | CliError::Type(_) | CliError::Input(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Type(e) => e.to_json(),
            CliError::Parse(e) => json!({"error": {"reason": "parse", "pos": e.pos(), "message": e.to_string()}}),
            CliError::Usage(m) => json!({"error": {"reason": "usage", "message": m}}),
            CliError::Input(m) => json!({"error": {"reason": "input", "message": m}}),
            CliError::Io(m) => json!({"error": {"reason": "io", "message": m}}),
        }
    }

    /// The diagnostic as one line of text.
    pub fn line(&self) -> String {
        let msg = self.to_string().split_whitespace().collect::<Vec<_>>().join(" ");
        format!("error: {msg}")
    }
}
