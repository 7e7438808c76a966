//! Command-line entry points. Each command prints one JSON summary line on
//! stdout; flags override the config file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use commentshield_core::encoder::PairEncoder;
use commentshield_core::personalizer::ModelKind;
use commentshield_core::synth;
use serde_json::json;

use crate::artifacts::{self, AnyEncoder};
use crate::config::{parse_list, parse_split, RunConfig};
use crate::report::write_text;
use crate::service::AppState;
use crate::{pipeline, store_io, Result};

#[derive(Debug, Parser)]
#[command(name = "commentshield", version, about = "Reader-personalized offensive comment prediction")]
pub struct Cli {
    /// TOML run configuration (falls back to $COMMENTSHIELD_CONFIG).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Corpus directory.
    #[arg(long, global = true)]
    pub data: Option<PathBuf>,
    /// Model artifact directory.
    #[arg(long, global = true)]
    pub artifacts: Option<PathBuf>,
    /// Hashing encoder dimension.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Feedback records pooled per reader.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Minimum feedback count for training and evaluation readers.
    #[arg(long, global = true)]
    pub eligibility_min: Option<usize>,
    /// Split boundaries as T1,T2 (unix seconds).
    #[arg(long, global = true)]
    pub split: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate corpus files and print counts.
    Ingest,
    /// Generate a synthetic corpus with ground truth.
    Synth {
        /// Output directory (defaults to the data directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train the commenter embedding model.
    TrainCommenter,
    /// Train offensive-prediction heads.
    Train {
        /// Model kind; all configured kinds when omitted.
        #[arg(long)]
        kind: Option<ModelKind>,
    },
    /// Score the test split and write an evaluation report.
    Evaluate {
        /// Comma-separated model kinds.
        #[arg(long)]
        models: Option<String>,
        /// Comma-separated Precision@k depths.
        #[arg(long)]
        k: Option<String>,
        /// Report path (defaults to <artifacts>/report.json).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write PR points as CSV.
        #[arg(long)]
        pr_csv: Option<PathBuf>,
    },
    /// Score one (reader, comment) pair.
    Predict {
        #[arg(long)]
        reader: String,
        #[arg(long)]
        comment: String,
        #[arg(long, default_value = "proposed")]
        kind: ModelKind,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        port: Option<u16>,
    },
}

impl Cli {
    /// Config file, then flag overrides.
    pub fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::resolve(self.config.as_deref())?;
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(d) = &self.data {
            c.data_dir = d.clone();
        }
        if let Some(a) = &self.artifacts {
            c.artifacts_dir = a.clone();
        }
        if let Some(d) = self.dim {
            c.encoder.hashing.dim = d;
        }
        if let Some(cap) = self.cap {
            c.cap = cap;
        }
        if let Some(m) = self.eligibility_min {
            c.eligibility_min = m;
        }
        if let Some(s) = &self.split {
            c.split = Some(parse_split(s)?);
        }
        match &self.command {
            Command::Evaluate { models, k, .. } => {
                if let Some(m) = models {
                    c.models = parse_list(m)?;
                }
                if let Some(k) = k {
                    c.k = parse_list(k)?;
                }
            }
            Command::Serve { port: Some(p) } => c.service.port = *p,
            _ => {}
        }
        c.validate()?;
        Ok(c)
    }
}

fn emit(value: serde_json::Value) {
    println!("{value}");
}

fn load_commenter_if(
    config: &RunConfig,
    kinds: &[ModelKind],
    encoder: &AnyEncoder,
) -> Result<Option<commentshield_core::commenter::CommenterModel>> {
    if kinds.iter().any(|k| k.needs_commenter_model()) {
        Ok(Some(artifacts::load_commenter(&artifacts::commenter_path(&config.artifacts_dir), encoder)?))
    } else {
        Ok(None)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let config = cli.config()?;
    match cli.command {
        Command::Ingest => {
            let store = pipeline::load_store(&config)?;
            emit(json!({ "command": "ingest", "counts": store.counts() }));
        }
        Command::Synth { out } => {
            let dir = out.unwrap_or_else(|| config.data_dir.clone());
            let corpus = synth::generate(&config.synth_config())?;
            store_io::write_synth(&dir, &corpus)?;
            emit(json!({
                "command": "synth",
                "dir": dir,
                "news": corpus.news.len(),
                "comments": corpus.comments.len(),
                "ratings": corpus.ratings.len(),
                "feedback": corpus.feedback.len(),
            }));
        }
        Command::TrainCommenter => {
            let store = pipeline::load_store(&config)?;
            let encoder = pipeline::build_encoder(&config)?;
            let (model, summary) = pipeline::train_commenter(&config, &store, &encoder)?;
            let path = artifacts::commenter_path(&config.artifacts_dir);
            artifacts::save_commenter(&path, &model)?;
            emit(json!({ "command": "train-commenter", "artifact": path, "summary": summary }));
        }
        Command::Train { kind } => {
            let kinds = kind.map_or_else(|| config.models.clone(), |k| vec![k]);
            let store = pipeline::load_store(&config)?;
            let encoder = pipeline::build_encoder(&config)?;
            let commenter = load_commenter_if(&config, &kinds, &encoder)?;
            let mut summaries = Vec::new();
            for k in kinds {
                let (head, summary) = pipeline::train_kind(&config, &store, &encoder, commenter.as_ref(), k)?;
                artifacts::save_head(&artifacts::head_path(&config.artifacts_dir, k), &head)?;
                summaries.push(summary);
            }
            emit(json!({ "command": "train", "heads": summaries }));
        }
        Command::Evaluate { out, pr_csv, .. } => {
            let store = pipeline::load_store(&config)?;
            let encoder = pipeline::build_encoder(&config)?;
            let commenter = load_commenter_if(&config, &config.models, &encoder)?;
            let mut heads = BTreeMap::new();
            for &k in &config.models {
                let cm = if k.needs_commenter_model() { commenter.as_ref() } else { None };
                heads.insert(k, artifacts::load_head(&artifacts::head_path(&config.artifacts_dir, k), &encoder, cm)?);
            }
            let report = pipeline::evaluate(&config, &store, &encoder, commenter.as_ref(), &heads)?;
            let path = out.unwrap_or_else(|| config.artifacts_dir.join("report.json"));
            report.write(&path)?;
            if let Some(csv) = &pr_csv {
                write_text(csv, &report.pr_csv())?;
            }
            emit(json!({ "command": "evaluate", "report": path, "pr_csv": pr_csv, "results": report.summary() }));
        }
        Command::Predict { reader, comment, kind } => {
            let store = pipeline::load_store(&config)?;
            let encoder = pipeline::build_encoder(&config)?;
            let commenter = load_commenter_if(&config, &[kind], &encoder)?;
            let head =
                artifacts::load_head(&artifacts::head_path(&config.artifacts_dir, kind), &encoder, commenter.as_ref())?;
            let mut f =
                commentshield_core::personalizer::Featurizer::new(&store, &encoder, commenter.as_ref(), config.cap)?;
            let score = head.predict(&f.input_vector(kind, &reader, &comment)?)?;
            emit(json!({
                "command": "predict",
                "reader_id": reader,
                "comment_id": comment,
                "model": kind,
                "score": score,
                "encoder": format!("{:016x}", encoder.fingerprint()),
            }));
        }
        Command::Serve { .. } => {
            let state = AppState::load(&config)?;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| crate::Error::io("tokio runtime", e))?;
            runtime.block_on(crate::service::serve(state))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_config() {
        let cli = Cli::parse_from([
            "commentshield",
            "--seed",
            "9",
            "--dim",
            "32",
            "evaluate",
            "--models",
            "simple,nopers",
            "--k",
            "1,3",
            "--split",
            "5,10",
        ]);
        let c = cli.config().unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.encoder.hashing.dim, 32);
        assert_eq!(c.models, vec![ModelKind::Simple, ModelKind::NoPersonalization]);
        assert_eq!(c.k, vec![1, 3]);
        assert_eq!(c.split, Some((5, 10)));
    }

    #[test]
    fn unknown_flag_rejected() {
        assert!(Cli::try_parse_from(["commentshield", "ingest", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["commentshield", "train", "--kind", "fancy"]).is_err());
    }
}
