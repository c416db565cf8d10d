use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("metric {metric} at t={t}: {reason}")]
    Metric { metric: &'static str, t: usize, reason: String },

    #[error("training diverged in stage `{stage}`: {source}")]
    Divergence { stage: String, source: strategies::StrategyError },

    #[error("{path}: {reason}")]
    Format { path: String, reason: String },

    #[error(transparent)]
    Strategy(#[from] strategies::StrategyError),

    #[error(transparent)]
    Model(#[from] seqmodel::ModelError),

    #[error(transparent)]
    Synth(#[from] synthlang::SynthError),

    #[error(transparent)]
    Ctc(#[from] ctcwer::CtcError),

    #[error(transparent)]
    Num(#[from] numkit::NumError),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    TomlWrite(#[from] toml::ser::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
