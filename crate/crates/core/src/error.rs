use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("empty text")]
    EmptyText,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid resource {name}{}: {reason}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    InvalidResource {
        name: String,
        line: Option<usize>,
        reason: String,
    },
    #[error("no token of the text is covered by the norms table")]
    NoCoverage,
    #[error("at least two sentences are required")]
    InsufficientSentences,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("insufficient history: {have} prior periods available, {need} required")]
    InsufficientHistory { have: usize, need: usize },
    #[error("effect size undefined: pooled standard deviation is zero")]
    UndefinedEffect,
    #[error("change rate undefined: baseline mean is zero")]
    UndefinedRate,
    #[error("unknown metric `{0}`")]
    InvalidMetric(String),
    #[error("date {0} is outside the corpus window")]
    OutOfWindow(chrono::NaiveDate),
    #[error("ambiguous sidecar: duplicate doc ids {0:?}")]
    Ambiguity(Vec<String>),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn resource(name: impl Into<String>, line: Option<usize>, reason: impl Into<String>) -> Self {
        Error::InvalidResource {
            name: name.into(),
            line,
            reason: reason.into(),
        }
    }

    /// Stable snake_case name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::EmptyText => "empty_text",
            Error::InvalidConfig(_) => "invalid_config",
            Error::InvalidResource { .. } => "invalid_resource",
            Error::NoCoverage => "no_coverage",
            Error::InsufficientSentences => "insufficient_sentences",
            Error::InsufficientData(_) => "insufficient_data",
            Error::InsufficientHistory { .. } => "insufficient_history",
            Error::UndefinedEffect => "undefined_effect",
            Error::UndefinedRate => "undefined_rate",
            Error::InvalidMetric(_) => "invalid_metric",
            Error::OutOfWindow(_) => "out_of_window",
            Error::Ambiguity(_) => "ambiguity",
            Error::Schema(_) => "schema",
        }
    }

    /// Resource and schema problems map to exit code 2, everything else to 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidResource { .. } | Error::Schema(_) | Error::Ambiguity(_) => 2,
            _ => 1,
        }
    }
}
