#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::OnceLock;

use commentshield::artifacts::AnyEncoder;
use commentshield::config::RunConfig;
use commentshield::pipeline;
use commentshield_core::commenter::CommenterModel;
use commentshield_core::corpus::CorpusStore;
use commentshield_core::personalizer::{ModelKind, OffensiveHead};
use commentshield_core::synth::{self, SynthConfig};

/// A small corpus that still clears the commenter roster threshold.
pub fn small_config(seed: u64) -> RunConfig {
    let mut c = RunConfig { seed, ..Default::default() };
    c.synth = SynthConfig {
        n_readers: 24,
        n_commenters: 8,
        n_news: 30,
        comments_per_commenter: 60,
        ratings_per_reader: 120,
        ..Default::default()
    };
    c.encoder.hashing.dim = 64;
    c.commenter.model.proj_dim = 16;
    c.commenter.model.epochs = 8;
    c.head.epochs = 8;
    c
}

pub fn synth_store(config: &RunConfig) -> CorpusStore {
    let corpus = synth::generate(&config.synth_config()).unwrap();
    CorpusStore::build(corpus.news, corpus.comments, corpus.ratings, corpus.feedback).unwrap()
}

pub struct Trained {
    pub config: RunConfig,
    pub store: CorpusStore,
    pub encoder: AnyEncoder,
    pub commenter: CommenterModel,
    pub heads: BTreeMap<ModelKind, OffensiveHead>,
}

/// Trained once per test binary.
pub fn trained() -> &'static Trained {
    static CELL: OnceLock<Trained> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = small_config(11);
        let store = synth_store(&config);
        let encoder = pipeline::build_encoder(&config).unwrap();
        let (commenter, _) = pipeline::train_commenter(&config, &store, &encoder).unwrap();
        let heads = ModelKind::ALL
            .iter()
            .map(|&k| (k, pipeline::train_kind(&config, &store, &encoder, Some(&commenter), k).unwrap().0))
            .collect();
        Trained { config, store, encoder, commenter, heads }
    })
}
