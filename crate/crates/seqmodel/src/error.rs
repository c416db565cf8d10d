use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model config: {0}")]
    Invalid(String),

    #[error("no head or adapter registered for task `{0}`")]
    UnknownTask(String),

    #[error("task `{0}` is already registered")]
    DuplicateTask(String),

    #[error("operation needs the {needed} token regime")]
    Regime { needed: &'static str },

    #[error("token {token} is not produced by the head for `{task}`")]
    VocabMismatch { task: String, token: u32 },

    #[error("input has no frames")]
    EmptyInput,

    #[error("checkpoint does not fit this model: {0}")]
    Mismatch(String),

    #[error(transparent)]
    Num(#[from] numkit::NumError),

    #[error(transparent)]
    Ctc(#[from] ctcwer::CtcError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ModelError>;
