//! Run configuration: a TOML file (or `COMMENTSHIELD_CONFIG`) plus flag
//! overrides. One master seed fans out to every stage.

use std::path::{Path, PathBuf};

use commentshield_core::commenter::{CommenterModelConfig, SplitCounts};
use commentshield_core::encoder::EncoderConfig;
use commentshield_core::eval::Exclusion;
use commentshield_core::personalizer::{HeadConfig, ModelKind, DEFAULT_ELIGIBILITY_MIN, DEFAULT_FEEDBACK_CAP};
use commentshield_core::seed;
use commentshield_core::synth::SynthConfig;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const CONFIG_ENV: &str = "COMMENTSHIELD_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    /// Directory holding the corpus files.
    pub data_dir: PathBuf,
    /// Directory for trained models.
    pub artifacts_dir: PathBuf,
    pub cap: usize,
    pub eligibility_min: usize,
    /// Absolute time boundaries (train < t1 <= validation < t2 <= test).
    /// Defaults to 70% and 85% of the comment time span.
    pub split: Option<(i64, i64)>,
    pub models: Vec<ModelKind>,
    pub k: Vec<usize>,
    pub exclusion: Exclusion,
    pub per_reader: bool,
    pub encoder: EncoderSection,
    pub commenter: CommenterSection,
    pub head: HeadConfig,
    pub synth: SynthConfig,
    pub service: ServiceConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            data_dir: PathBuf::from("data"),
            artifacts_dir: PathBuf::from("artifacts"),
            cap: DEFAULT_FEEDBACK_CAP,
            eligibility_min: DEFAULT_ELIGIBILITY_MIN,
            split: None,
            models: ModelKind::ALL.to_vec(),
            k: vec![1, 3, 5, 10],
            exclusion: Exclusion::MinPositives,
            per_reader: true,
            encoder: EncoderSection::default(),
            commenter: CommenterSection::default(),
            head: HeadConfig::default(),
            synth: SynthConfig::default(),
            service: ServiceConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncoderSection {
    #[serde(flatten)]
    pub hashing: EncoderConfig,
    /// Use precomputed vectors from this file instead of hashing.
    pub external: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CommenterSection {
    #[serde(flatten)]
    pub model: CommenterModelConfig,
    /// Commenters need more than this many comments to enter the roster.
    pub min_comments: usize,
    pub split: SplitCounts,
}

impl Default for CommenterSection {
    fn default() -> Self {
        Self { model: CommenterModelConfig::default(), min_comments: 50, split: SplitCounts::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ServiceConfig {
    pub host: String,
    pub port: u16,
    /// Allowed browser origins; `["*"]` allows any.
    pub cors_origins: Vec<String>,
    pub default_threshold: f64,
    pub default_limit: usize,
    /// Append accepted feedback to this file.
    pub feedback_log: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            host: String::from("127.0.0.1"),
            port: 8080,
            cors_origins: vec![String::from("http://localhost:5173")],
            default_threshold: 0.5,
            default_limit: 20,
            feedback_log: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Explicit path first, then `COMMENTSHIELD_CONFIG`, then defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        match explicit {
            Some(p) => Self::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Self::load(Path::new(&p)),
                _ => Ok(Self::default()),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.cap == 0 {
            return bad("cap must be >= 1".into());
        }
        if self.k.is_empty() || self.k.contains(&0) {
            return bad("k must list values >= 1".into());
        }
        if self.models.is_empty() {
            return bad("models must not be empty".into());
        }
        if let Some((a, b)) = self.split {
            if a >= b {
                return bad(format!("split boundaries must increase, got {a},{b}"));
            }
        }
        if !(0.0..=1.0).contains(&self.service.default_threshold) {
            return bad("default_threshold must lie in [0, 1]".into());
        }
        self.encoder.hashing.validate()?;
        self.commenter.model.validate()?;
        self.head.validate()?;
        Ok(())
    }

    /// Seed for a named stage.
    pub fn stage_seed(&self, stage: &str) -> u64 {
        seed::derive(self.seed, stage)
    }

    pub fn commenter_model_config(&self) -> CommenterModelConfig {
        CommenterModelConfig { seed: self.stage_seed("commenter/init"), ..self.commenter.model.clone() }
    }

    pub fn head_config(&self, kind: ModelKind) -> HeadConfig {
        HeadConfig { seed: self.stage_seed(&format!("head/{kind}")), ..self.head.clone() }
    }

    pub fn synth_config(&self) -> SynthConfig {
        SynthConfig { seed: self.stage_seed("synth"), ..self.synth.clone() }
    }
}

/// `"a,b"` into two integers.
pub fn parse_split(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once(',').ok_or_else(|| Error::Config(format!("split `{s}` must be T1,T2")))?;
    let parse = |v: &str| v.trim().parse::<i64>().map_err(|e| Error::Config(format!("split `{s}`: {e}")));
    Ok((parse(a)?, parse(b)?))
}

pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<T>().map_err(|e| Error::Config(format!("`{p}`: {e}"))))
        .collect()
}
