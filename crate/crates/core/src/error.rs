use thiserror::Error;

/// Errors produced by the simulator, the search/counting layers and the
/// separation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("register of {requested} qubits exceeds the simulator limit of {limit} qubits")]
    Resource { requested: u32, limit: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("model `{model}` broke its contract: {reason}")]
    ModelContract { model: String, reason: String },

    #[error("invalid configuration:\n{}", format_findings(.0))]
    Validation(Vec<Finding>),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A single violated configuration constraint, located by its config path
/// (for example `sets[1].params.bucket_width`).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Finding {
    pub path: String,
    pub message: String,
}

impl Finding {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Finding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn format_findings(findings: &[Finding]) -> String {
    findings
        .iter()
        .map(|f| format!("  - {f}"))
        .collect::<Vec<_>>()
        .join("\n")
}

pub(crate) fn arg(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}
