use serde::Serialize;
use thiserror::Error;

/// Exit codes: 0 ok, 1 other failure, 2 input error, 3 pole, 4 grid
/// exhaustion, 5 non-torsion point.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("malformed JSON in {file} at line {line}, column {column}: {message}")]
    Json {
        file: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Pole(String),
    #[error("{0}")]
    GridExhausted(String),
    #[error("{0}")]
    NotTorsion(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Serialize)]
pub struct ErrorDocument {
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub exit_code: i32,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Json { .. } => 2,
            CliError::Pole(_) => 3,
            CliError::GridExhausted(_) => 4,
            CliError::NotTorsion(_) => 5,
            CliError::Other(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) | CliError::Json { .. } => "input",
            CliError::Pole(_) => "pole",
            CliError::GridExhausted(_) => "grid_exhausted",
            CliError::NotTorsion(_) => "not_torsion",
            CliError::Other(_) => "failure",
        }
    }

    pub fn document(&self) -> ErrorDocument {
        let (line, column) = match self {
            CliError::Json { line, column, .. } => (Some(*line), Some(*column)),
            _ => (None, None),
        };
        ErrorDocument {
            error: ErrorBody {
                kind: self.kind(),
                exit_code: self.exit_code(),
                message: self.to_string(),
                line,
                column,
            },
        }
    }
}

impl From<ellgen::Error> for CliError {
    fn from(e: ellgen::Error) -> Self {
        use ellgen::Error as E;
        match e {
            E::Pole(_) | E::PoleHit(_) => CliError::Pole(e.to_string()),
            E::GridExhausted(_) => CliError::GridExhausted(e.to_string()),
            E::NotTorsion(_) => CliError::NotTorsion(e.to_string()),
            E::Invalid(_)
            | E::NotUnital(_)
            | E::ParityRequired
            | E::NotInjective { .. }
            | E::NotBtCompatible(_) => CliError::Input(e.to_string()),
            _ => CliError::Other(e.to_string()),
        }
    }
}
