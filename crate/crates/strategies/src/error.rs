use thiserror::Error;

#[derive(Debug, Error)]
pub enum StrategyError {
    #[error("invalid strategy config: {0}")]
    Invalid(String),

    #[error("unknown strategy kind `{0}`")]
    UnknownKind(String),

    #[error("{0} needs a teacher but none was taken")]
    MissingTeacher(&'static str),

    #[error("{0} does not keep parameter importance")]
    NotRegularizing(&'static str),

    #[error("non-finite loss ({0})")]
    NonFinite(f64),

    #[error("corrupt strategy state: {0}")]
    State(String),

    #[error(transparent)]
    Model(#[from] seqmodel::ModelError),

    #[error(transparent)]
    Num(#[from] numkit::NumError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, StrategyError>;
