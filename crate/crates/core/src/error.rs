use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{width}x{height} is not divisible by scale {scale}")]
    NotDivisible {
        width: usize,
        height: usize,
        scale: usize,
    },
    #[error("expected {expected} channels, got {actual}")]
    ChannelCount { expected: String, actual: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{name} out of domain: {value}")]
    Domain { name: &'static str, value: f64 },
    #[error("invalid sample {value} at index {index}")]
    InvalidSample { index: usize, value: f64 },
    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("invalid policy: {0}")]
    InvalidPolicy(String),
    #[error("config: {0}")]
    Config(String),
    #[error("empty dataset: {0}")]
    EmptyDataset(String),
    #[error("file names differ between directories: {0:?}")]
    NameMismatch(Vec<String>),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("png: {0}")]
    Png(String),
    #[error("jpeg: {0}")]
    Jpeg(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short stable identifier used in machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotDivisible { .. } => "not_divisible",
            Error::ChannelCount { .. } => "channel_count",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Domain { .. } => "domain",
            Error::InvalidSample { .. } => "invalid_sample",
            Error::InvalidImage(_) => "invalid_image",
            Error::InvalidPolicy(_) => "invalid_policy",
            Error::Config(_) => "config",
            Error::EmptyDataset(_) => "empty_dataset",
            Error::NameMismatch(_) => "name_mismatch",
            Error::UnknownMethod(_) => "unknown_method",
            Error::Io { .. } => "io",
            Error::Png(_) => "png",
            Error::Jpeg(_) => "jpeg",
            Error::Json(_) => "json",
        }
    }
}
