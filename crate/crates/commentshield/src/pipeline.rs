//! Offline stages: load the corpus, train the commenter model and the heads,
//! and evaluate on the chronological test split.

use std::collections::{BTreeMap, BTreeSet};

use commentshield_core::commenter::{build_commenter_dataset, train_commenter_model, CommenterModel};
use commentshield_core::corpus::{CorpusStore, RatingRecord, TimeSplit};
use commentshield_core::encoder::PairEncoder;
use commentshield_core::personalizer::{
    build_training_set, train_head, Featurizer, ModelKind, OffensiveHead, TrainingSet,
};
use serde::Serialize;

use crate::artifacts::AnyEncoder;
use crate::config::RunConfig;
use crate::report::{EvalReport, ModelReport};
use crate::store_io::{load_corpus, CorpusPaths};
use crate::{Error, Result};

pub fn load_store(config: &RunConfig) -> Result<CorpusStore> {
    load_corpus(&CorpusPaths::in_dir(&config.data_dir))
}

pub fn build_encoder(config: &RunConfig) -> Result<AnyEncoder> {
    AnyEncoder::from_config(&config.encoder)
}

/// Configured boundaries, or 70% and 85% of the comment time span.
pub fn split_bounds(config: &RunConfig, store: &CorpusStore) -> Result<(i64, i64)> {
    if let Some(b) = config.split {
        return Ok(b);
    }
    let (first, last) = store.time_span().ok_or_else(|| Error::Config("corpus has no comments".into()))?;
    let span = (last - first) as f64;
    let t1 = first + (0.70 * span).round() as i64;
    let t2 = first + (0.85 * span).round() as i64;
    if t1 >= t2 {
        return Err(Error::Config(format!("comment time span {first}..{last} is too short to split")));
    }
    Ok((t1, t2))
}

pub fn time_split(config: &RunConfig, store: &CorpusStore) -> Result<((i64, i64), TimeSplit)> {
    let bounds = split_bounds(config, store)?;
    Ok((bounds, store.split_by_time(store.ratings(), bounds)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommenterSummary {
    pub commenters: usize,
    pub train_examples: usize,
    pub validation_examples: usize,
    pub test_examples: usize,
    pub best_epoch: usize,
    pub validation_accuracy: Option<f64>,
    pub test_accuracy: Option<f64>,
    pub fingerprint: String,
}

pub fn train_commenter<E: PairEncoder>(
    config: &RunConfig,
    store: &CorpusStore,
    encoder: &E,
) -> Result<(CommenterModel, CommenterSummary)> {
    let data = build_commenter_dataset(
        store,
        encoder,
        config.commenter.min_comments,
        config.commenter.split,
        config.stage_seed("commenter/sample"),
    )?;
    let (model, report) = train_commenter_model(&data, &config.commenter_model_config(), encoder.fingerprint())?;
    let accuracy = |d: &commentshield_core::commenter::CommenterDataset| -> Result<Option<f64>> {
        Ok(if d.is_empty() { None } else { Some(model.accuracy(d)?) })
    };
    let summary = CommenterSummary {
        commenters: data.roster.len(),
        train_examples: data.train.len(),
        validation_examples: data.validation.len(),
        test_examples: data.test.len(),
        best_epoch: report.best_epoch,
        validation_accuracy: accuracy(&data.validation)?,
        test_accuracy: accuracy(&data.test)?,
        fingerprint: format!("{:016x}", model.fingerprint()),
    };
    Ok((model, summary))
}

/// Eligible examples of `ratings`; an empty partition yields an empty set.
fn examples<E: PairEncoder>(
    kind: ModelKind,
    featurizer: &mut Featurizer<'_, E>,
    ratings: &[RatingRecord],
    eligibility_min: usize,
) -> Result<TrainingSet> {
    match build_training_set(kind, featurizer, ratings, eligibility_min) {
        Ok(set) => Ok(set),
        Err(commentshield_core::Error::NoEligibleReaders(_)) if ratings.is_empty() => Ok(TrainingSet::new(
            kind,
            featurizer.encoder_fingerprint(),
            if kind.needs_commenter_model() { featurizer.commenter_fingerprint() } else { None },
        )),
        Err(e) => Err(e.into()),
    }
}

fn featurizer<'a, E: PairEncoder>(
    config: &RunConfig,
    kind: ModelKind,
    store: &'a CorpusStore,
    encoder: &'a E,
    commenter: Option<&'a CommenterModel>,
) -> Result<Featurizer<'a, E>> {
    if kind.needs_commenter_model() && commenter.is_none() {
        return Err(commentshield_core::Error::MissingCommenterModel.into());
    }
    let cm = if kind.needs_commenter_model() { commenter } else { None };
    Ok(Featurizer::new(store, encoder, cm, config.cap)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeadSummary {
    pub kind: ModelKind,
    pub train_examples: usize,
    pub train_positives: usize,
    pub validation_examples: usize,
    pub best_epoch: usize,
    pub validation_ap: Option<f64>,
    pub final_loss: Option<f64>,
}

pub fn train_kind<E: PairEncoder>(
    config: &RunConfig,
    store: &CorpusStore,
    encoder: &E,
    commenter: Option<&CommenterModel>,
    kind: ModelKind,
) -> Result<(OffensiveHead, HeadSummary)> {
    let (_, split) = time_split(config, store)?;
    let mut f = featurizer(config, kind, store, encoder, commenter)?;
    let train = examples(kind, &mut f, &split.train, config.eligibility_min)?;
    let validation = examples(kind, &mut f, &split.validation, config.eligibility_min)?;
    let (head, report) = train_head(&train, &validation, &config.head_config(kind))?;
    let summary = HeadSummary {
        kind,
        train_examples: train.len(),
        train_positives: train.positives(),
        validation_examples: validation.len(),
        best_epoch: report.best_epoch,
        validation_ap: report.validation_ap.get(report.best_epoch).copied().flatten(),
        final_loss: report.loss_history.last().copied(),
    };
    Ok((head, summary))
}

/// Scores the test split with each head. Fails if a test comment also
/// occurs in the training partition.
pub fn evaluate<E: PairEncoder>(
    config: &RunConfig,
    store: &CorpusStore,
    encoder: &E,
    commenter: Option<&CommenterModel>,
    heads: &BTreeMap<ModelKind, OffensiveHead>,
) -> Result<EvalReport> {
    let (bounds, split) = time_split(config, store)?;
    let trained: BTreeSet<&str> = split.train.iter().map(|r| r.comment_id.as_str()).collect();

    let mut models = Vec::with_capacity(config.models.len());
    for &kind in &config.models {
        let head = heads.get(&kind).ok_or_else(|| Error::Config(format!("no trained head for model kind `{kind}`")))?;
        head.validate_fingerprints(encoder.fingerprint(), commenter.map(CommenterModel::fingerprint))?;
        let mut f = featurizer(config, kind, store, encoder, commenter)?;
        let test = build_training_set(kind, &mut f, &split.test, config.eligibility_min)?;
        if let Some(e) = test.examples.iter().find(|e| trained.contains(e.comment_id.as_str())) {
            return Err(Error::Leakage(e.comment_id.clone()));
        }
        let scored = head.score_set(&test)?;
        models.push(ModelReport::from_scores(kind, &scored, &config.k, config.per_reader, config.exclusion)?);
    }
    Ok(EvalReport {
        seed: config.seed,
        split: bounds,
        cap: config.cap,
        eligibility_min: config.eligibility_min,
        per_reader: config.per_reader,
        exclusion: config.exclusion,
        models,
    })
}

/// Trains everything in memory and evaluates; used by tests and tuning.
pub fn run_in_memory<E: PairEncoder>(config: &RunConfig, store: &CorpusStore, encoder: &E) -> Result<EvalReport> {
    let commenter = if config.models.iter().any(|k| k.needs_commenter_model()) {
        Some(train_commenter(config, store, encoder)?.0)
    } else {
        None
    };
    let mut heads = BTreeMap::new();
    for &kind in &config.models {
        heads.insert(kind, train_kind(config, store, encoder, commenter.as_ref(), kind)?.0);
    }
    evaluate(config, store, encoder, commenter.as_ref(), &heads)
}
