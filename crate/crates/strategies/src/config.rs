use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StrategyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StrategyKind {
    #[serde(rename = "FT")]
    Ft,
    #[serde(rename = "ER")]
    Er,
    #[serde(rename = "A-GEM", alias = "AGEM")]
    Agem,
    #[serde(rename = "DER")]
    Der,
    #[serde(rename = "PNN")]
    Pnn,
    #[serde(rename = "PB")]
    Pb,
    #[serde(rename = "L2P")]
    L2p,
    #[serde(rename = "EWC")]
    Ewc,
    #[serde(rename = "LwF", alias = "LWF")]
    Lwf,
    #[serde(rename = "MAS")]
    Mas,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 10] = [
        StrategyKind::Ft,
        StrategyKind::Er,
        StrategyKind::Agem,
        StrategyKind::Der,
        StrategyKind::Pnn,
        StrategyKind::Pb,
        StrategyKind::L2p,
        StrategyKind::Ewc,
        StrategyKind::Lwf,
        StrategyKind::Mas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Ft => "FT",
            StrategyKind::Er => "ER",
            StrategyKind::Agem => "A-GEM",
            StrategyKind::Der => "DER",
            StrategyKind::Pnn => "PNN",
            StrategyKind::Pb => "PB",
            StrategyKind::L2p => "L2P",
            StrategyKind::Ewc => "EWC",
            StrategyKind::Lwf => "LwF",
            StrategyKind::Mas => "MAS",
        }
    }

    /// Keeps a sample of every finished task.
    pub fn keeps_buffer(self) -> bool {
        matches!(self, StrategyKind::Er | StrategyKind::Agem | StrategyKind::Der)
    }

    /// Trains on current data mixed with the buffer.
    pub fn mixes_data(self) -> bool {
        matches!(self, StrategyKind::Er | StrategyKind::Der)
    }

    pub fn is_architectural(self) -> bool {
        matches!(self, StrategyKind::Pnn | StrategyKind::Pb | StrategyKind::L2p)
    }

    pub fn is_regularizing(self) -> bool {
        matches!(self, StrategyKind::Ewc | StrategyKind::Mas)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_uppercase();
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name().replace('-', "").to_ascii_uppercase() == key)
            .ok_or_else(|| StrategyError::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// Fraction of each finished task's training set kept for rehearsal.
    pub replay_ratio: f64,
    pub der_alpha: f64,
    pub ewc_lambda: f64,
    pub ewc_alpha: f64,
    pub lwf_temperature: f64,
    pub lwf_lambda: f64,
    pub mas_lambda: f64,
    pub mas_alpha: f64,
    pub pb_init: f64,
    pub pb_threshold: f64,
    /// Half-width of the uniform noise added to identity prompts.
    pub prompt_noise: f64,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self {
            kind: StrategyKind::Ft,
            replay_ratio: 0.10,
            der_alpha: 1.0,
            ewc_lambda: 5.0,
            ewc_alpha: 0.5,
            lwf_temperature: 2.0,
            lwf_lambda: 10.0,
            mas_lambda: 1.0,
            mas_alpha: 0.5,
            pb_init: 0.01,
            pb_threshold: 0.005,
            prompt_noise: 0.01,
        }
    }
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        Self { kind, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(StrategyError::Invalid(m));
        if !(self.replay_ratio > 0.0 && self.replay_ratio <= 1.0) {
            return bad(format!("replay_ratio {} outside (0, 1]", self.replay_ratio));
        }
        if !(self.lwf_temperature > 0.0) {
            return bad("lwf_temperature must be positive".into());
        }
        for (name, a) in [("ewc_alpha", self.ewc_alpha), ("mas_alpha", self.mas_alpha)] {
            if !(0.0..=1.0).contains(&a) {
                return bad(format!("{name} {a} outside [0, 1]"));
            }
        }
        for (name, v) in [
            ("der_alpha", self.der_alpha),
            ("ewc_lambda", self.ewc_lambda),
            ("lwf_lambda", self.lwf_lambda),
            ("mas_lambda", self.mas_lambda),
            ("prompt_noise", self.prompt_noise),
        ] {
            if !(v >= 0.0) {
                return bad(format!("{name} must be non-negative"));
            }
        }
        if !(self.pb_init > self.pb_threshold) {
            return bad("pb_init must exceed pb_threshold so masks start all-ones".into());
        }
        Ok(())
    }
}
