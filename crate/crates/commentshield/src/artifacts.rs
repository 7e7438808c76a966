//! Trained-model files. Every artifact is pretty-printed JSON wrapped with a
//! format tag; loading checks the tag and the fingerprints it was trained on.

use std::fs;
use std::path::{Path, PathBuf};

use commentshield_core::commenter::CommenterModel;
use commentshield_core::encoder::{EmbeddingVector, HashingEncoder, PairEncoder, PairInput, PrecomputedEncoder};
use commentshield_core::personalizer::{ModelKind, OffensiveHead};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::EncoderSection;
use crate::{store_io, Error, Result};

pub const COMMENTER_FILE: &str = "commenter.json";

pub fn head_file(kind: ModelKind) -> String {
    format!("head_{kind}.json")
}

/// The configured text-pair encoder.
#[derive(Debug, Clone)]
pub enum AnyEncoder {
    Hashing(HashingEncoder),
    Precomputed(PrecomputedEncoder),
}

impl AnyEncoder {
    pub fn from_config(section: &EncoderSection) -> Result<Self> {
        Ok(match &section.external {
            Some(path) => AnyEncoder::Precomputed(store_io::load_external(path)?),
            None => AnyEncoder::Hashing(HashingEncoder::new(section.hashing)?),
        })
    }
}

impl PairEncoder for AnyEncoder {
    fn dim(&self) -> usize {
        match self {
            AnyEncoder::Hashing(e) => e.dim(),
            AnyEncoder::Precomputed(e) => e.dim(),
        }
    }

    fn encode(&self, pair: &PairInput<'_>) -> commentshield_core::Result<EmbeddingVector> {
        match self {
            AnyEncoder::Hashing(e) => e.encode(pair),
            AnyEncoder::Precomputed(e) => e.encode(pair),
        }
    }

    fn fingerprint(&self) -> u64 {
        match self {
            AnyEncoder::Hashing(e) => e.fingerprint(),
            AnyEncoder::Precomputed(e) => e.fingerprint(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    model: T,
}

const COMMENTER_FORMAT: &str = "commentshield/commenter-model/v1";
const HEAD_FORMAT: &str = "commentshield/offensive-head/v1";

fn save<T: Serialize>(path: &Path, format: &str, model: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let env = Envelope { format: format.to_string(), model };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| Error::Json { path: path.into(), source: e })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn load<T: DeserializeOwned>(path: &Path, format: &str, hint: &'static str) -> Result<T> {
    if !path.exists() {
        return Err(Error::MissingArtifact { path: path.to_path_buf(), hint });
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let env: Envelope<T> = serde_json::from_str(&text).map_err(|e| Error::Json { path: path.into(), source: e })?;
    if env.format != format {
        return Err(Error::Config(format!("{}: expected format {format}, found {}", path.display(), env.format)));
    }
    Ok(env.model)
}

pub fn save_commenter(path: &Path, model: &CommenterModel) -> Result<()> {
    save(path, COMMENTER_FORMAT, model)
}

/// Loads a commenter model and checks it was built on `encoder`.
pub fn load_commenter(path: &Path, encoder: &impl PairEncoder) -> Result<CommenterModel> {
    let model: CommenterModel = load(path, COMMENTER_FORMAT, "run `train-commenter` first")?;
    if model.base_encoder_fingerprint != encoder.fingerprint() {
        return Err(commentshield_core::Error::FingerprintMismatch {
            artifact: "commenter model base encoder",
            expected: model.base_encoder_fingerprint,
            found: encoder.fingerprint(),
        }
        .into());
    }
    if !model.is_finite() {
        return Err(Error::Config(format!("{}: non-finite parameters", path.display())));
    }
    Ok(model)
}

pub fn save_head(path: &Path, head: &OffensiveHead) -> Result<()> {
    save(path, HEAD_FORMAT, head)
}

/// Loads a head and checks its encoder and commenter-model fingerprints.
pub fn load_head(path: &Path, encoder: &impl PairEncoder, commenter: Option<&CommenterModel>) -> Result<OffensiveHead> {
    let head: OffensiveHead = load(path, HEAD_FORMAT, "run `train --kind <kind>` first")?;
    head.validate_fingerprints(encoder.fingerprint(), commenter.map(CommenterModel::fingerprint))?;
    Ok(head)
}

pub fn commenter_path(dir: &Path) -> PathBuf {
    dir.join(COMMENTER_FILE)
}

pub fn head_path(dir: &Path, kind: ModelKind) -> PathBuf {
    dir.join(head_file(kind))
}
