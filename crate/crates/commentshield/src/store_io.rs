//! Corpus directories: `news.jsonl`, `comments.jsonl`, `ratings.jsonl`,
//! `feedback.jsonl` (optional) and, for synthetic corpora, `ground_truth.jsonl`.

use std::fs;
use std::path::{Path, PathBuf};

use commentshield_core::corpus::{Comment, CorpusStore, FeedbackRecord, NewsTweet, RatingRecord};
use commentshield_core::encoder::{ExternalEmbedding, PrecomputedEncoder};
use commentshield_core::synth::SynthCorpus;

use crate::{jsonl, Error, Result};

pub const NEWS: &str = "news.jsonl";
pub const COMMENTS: &str = "comments.jsonl";
pub const RATINGS: &str = "ratings.jsonl";
pub const FEEDBACK: &str = "feedback.jsonl";
pub const GROUND_TRUTH: &str = "ground_truth.jsonl";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusPaths {
    pub news: PathBuf,
    pub comments: PathBuf,
    pub ratings: PathBuf,
    pub feedback: PathBuf,
}

impl CorpusPaths {
    pub fn in_dir(dir: &Path) -> Self {
        Self {
            news: dir.join(NEWS),
            comments: dir.join(COMMENTS),
            ratings: dir.join(RATINGS),
            feedback: dir.join(FEEDBACK),
        }
    }
}

/// Loads and validates a corpus. A missing feedback file means no feedback.
pub fn load_corpus(paths: &CorpusPaths) -> Result<CorpusStore> {
    let news: Vec<NewsTweet> = jsonl::read(&paths.news)?;
    let comments: Vec<Comment> = jsonl::read(&paths.comments)?;
    let ratings: Vec<RatingRecord> = jsonl::read(&paths.ratings)?;
    let feedback: Vec<FeedbackRecord> =
        if paths.feedback.exists() { jsonl::read(&paths.feedback)? } else { Vec::new() };
    Ok(CorpusStore::build(news, comments, ratings, feedback)?)
}

pub fn write_synth(dir: &Path, corpus: &SynthCorpus) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let paths = CorpusPaths::in_dir(dir);
    jsonl::write(&paths.news, &corpus.news)?;
    jsonl::write(&paths.comments, &corpus.comments)?;
    jsonl::write(&paths.ratings, &corpus.ratings)?;
    jsonl::write(&paths.feedback, &corpus.feedback)?;
    jsonl::write(&dir.join(GROUND_TRUTH), &corpus.truth.records)
}

/// Reads an external-embedding file into a lookup encoder.
pub fn load_external(path: &Path) -> Result<PrecomputedEncoder> {
    let entries: Vec<ExternalEmbedding> = jsonl::read(path)?;
    Ok(PrecomputedEncoder::from_entries(entries)?)
}
