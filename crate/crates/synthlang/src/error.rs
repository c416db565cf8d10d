use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid language config: {0}")]
    Invalid(String),

    #[error("language `{lang}`: prototypes only {distance:.4} apart (minimum {threshold}); increase d_in")]
    PrototypesTooClose { lang: String, distance: f64, threshold: f64 },

    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },

    #[error("feature file: {0}")]
    Features(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Num(#[from] numkit::NumError),
}

pub type Result<T> = std::result::Result<T, SynthError>;
