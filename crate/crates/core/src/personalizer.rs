//! Target and reader vectors, training sets, and the offensive-probability
//! heads for the three model kinds.
//!
//! Vector layout (fixed; slicing recovers every component exactly):
//!
//! ```text
//! simple             x = [ pair(c)            | mean pair(F)                  ]
//! proposed           x = [ pair(c) | enc(u_c) | mean pair(F) | mean enc(u_F) ]
//! no_personalization x = [ pair(c) ]
//! ```
//!
//! where `F` is the reader's capped feedback set and `u_c` the author of `c`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::commenter::CommenterModel;
use crate::corpus::{CorpusStore, Label, RatingRecord};
use crate::encoder::{encode_stored_comment, EmbeddingVector, PairEncoder};
use crate::eval::{average_precision, ScoredExample};
use crate::linalg::{axpy, dot, mean_of, sigmoid, Matrix};
use crate::{Error, Result};

/// Readers need this many feedback records to enter training.
pub const DEFAULT_ELIGIBILITY_MIN: usize = 5;
/// At most this many feedback records build a reader vector.
pub const DEFAULT_FEEDBACK_CAP: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Simple,
    Proposed,
    NoPersonalization,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Simple, ModelKind::Proposed, ModelKind::NoPersonalization];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Simple => "simple",
            ModelKind::Proposed => "proposed",
            ModelKind::NoPersonalization => "no_personalization",
        }
    }

    pub fn is_personalized(self) -> bool {
        self != ModelKind::NoPersonalization
    }

    pub fn needs_commenter_model(self) -> bool {
        self == ModelKind::Proposed
    }

    /// Width of the target (and reader) half.
    pub fn half_dim(self, pair_dim: usize, proj_dim: usize) -> usize {
        match self {
            ModelKind::Proposed => pair_dim + proj_dim,
            _ => pair_dim,
        }
    }

    pub fn input_dim(self, pair_dim: usize, proj_dim: usize) -> usize {
        let half = self.half_dim(pair_dim, proj_dim);
        if self.is_personalized() {
            2 * half
        } else {
            half
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(ModelKind::Simple),
            "proposed" => Ok(ModelKind::Proposed),
            "no_personalization" | "nopers" | "no-personalization" => Ok(ModelKind::NoPersonalization),
            other => Err(Error::InvalidConfig(alloc::format!("unknown model kind `{other}`"))),
        }
    }
}

/// Embedding of the comment under prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetVector {
    pub kind: ModelKind,
    pub values: EmbeddingVector,
    pub pair_dim: usize,
}

impl TargetVector {
    pub fn pair_part(&self) -> &[f64] {
        &self.values[..self.pair_dim]
    }

    /// `enc(commenter(c))`; empty unless the kind is proposed.
    pub fn commenter_part(&self) -> &[f64] {
        &self.values[self.pair_dim..]
    }
}

/// Embedding of a reader built from their capped feedback.
#[derive(Debug, Clone, PartialEq)]
pub struct ReaderVector {
    pub kind: ModelKind,
    pub values: EmbeddingVector,
    pub pair_dim: usize,
}

impl ReaderVector {
    pub fn pair_part(&self) -> &[f64] {
        &self.values[..self.pair_dim]
    }

    pub fn commenter_part(&self) -> &[f64] {
        &self.values[self.pair_dim..]
    }
}

/// Builds vectors against one store, encoder and (optional) commenter model,
/// memoizing pair vectors and commenter embeddings.
pub struct Featurizer<'a, E: PairEncoder + ?Sized> {
    store: &'a CorpusStore,
    encoder: &'a E,
    commenter_model: Option<&'a CommenterModel>,
    cap: usize,
    pairs: BTreeMap<String, EmbeddingVector>,
    commenters: BTreeMap<String, EmbeddingVector>,
}

impl<'a, E: PairEncoder + ?Sized> Featurizer<'a, E> {
    pub fn new(
        store: &'a CorpusStore,
        encoder: &'a E,
        commenter_model: Option<&'a CommenterModel>,
        cap: usize,
    ) -> Result<Self> {
        if cap == 0 {
            return Err(Error::InvalidConfig(String::from("feedback cap must be >= 1")));
        }
        if let Some(m) = commenter_model {
            if m.base_encoder_fingerprint != encoder.fingerprint() {
                return Err(Error::FingerprintMismatch {
                    artifact: "commenter model base encoder",
                    expected: encoder.fingerprint(),
                    found: m.base_encoder_fingerprint,
                });
            }
            if m.input_dim() != encoder.dim() {
                return Err(Error::DimensionMismatch { expected: encoder.dim(), actual: m.input_dim() });
            }
        }
        Ok(Self { store, encoder, commenter_model, cap, pairs: BTreeMap::new(), commenters: BTreeMap::new() })
    }

    pub fn store(&self) -> &'a CorpusStore {
        self.store
    }

    pub fn pair_dim(&self) -> usize {
        self.encoder.dim()
    }

    pub fn proj_dim(&self) -> usize {
        self.commenter_model.map_or(0, CommenterModel::proj_dim)
    }

    pub fn encoder_fingerprint(&self) -> u64 {
        self.encoder.fingerprint()
    }

    pub fn commenter_fingerprint(&self) -> Option<u64> {
        self.commenter_model.map(CommenterModel::fingerprint)
    }

    fn model_for(&self, kind: ModelKind) -> Result<Option<&'a CommenterModel>> {
        match (kind.needs_commenter_model(), self.commenter_model) {
            (true, None) => Err(Error::MissingCommenterModel),
            (true, m) => Ok(m),
            (false, _) => Ok(None),
        }
    }

    /// `encode_pair(clean_news(news(c)), clean_comment(c))`.
    pub fn pair_vector(&mut self, comment_id: &str) -> Result<EmbeddingVector> {
        if let Some(v) = self.pairs.get(comment_id) {
            return Ok(v.clone());
        }
        let comment = self.store.comment(comment_id)?;
        let v = encode_stored_comment(self.encoder, self.store, comment)?;
        self.pairs.insert(String::from(comment_id), v.clone());
        Ok(v)
    }

    /// `enc(u)` from the commenter model.
    pub fn commenter_vector(&mut self, commenter_id: &str) -> Result<EmbeddingVector> {
        if let Some(v) = self.commenters.get(commenter_id) {
            return Ok(v.clone());
        }
        let model = self.commenter_model.ok_or(Error::MissingCommenterModel)?;
        let v = model.enc(self.store, self.encoder, commenter_id)?;
        self.commenters.insert(String::from(commenter_id), v.clone());
        Ok(v)
    }

    pub fn target_vector(&mut self, kind: ModelKind, comment_id: &str) -> Result<TargetVector> {
        let model = self.model_for(kind)?;
        let pair = self.pair_vector(comment_id)?;
        let pair_dim = pair.dim();
        let values = match model {
            Some(_) => {
                let author = self.store.comment(comment_id)?.commenter_id.clone();
                pair.concat(&self.commenter_vector(&author)?)
            }
            None => pair,
        };
        Ok(TargetVector { kind, values, pair_dim })
    }

    pub fn reader_vector(&mut self, kind: ModelKind, reader_id: &str) -> Result<ReaderVector> {
        if !kind.is_personalized() {
            return Err(Error::UnsupportedKind(kind.as_str()));
        }
        let model = self.model_for(kind)?;
        if self.store.feedback_count(reader_id) == 0 {
            return Err(Error::EmptyFeedback(String::from(reader_id)));
        }
        let feedback: Vec<(String, String)> = self
            .store
            .offensive_feedback(reader_id, self.cap)?
            .into_iter()
            .map(|c| (c.id.clone(), c.commenter_id.clone()))
            .collect();

        let pairs = feedback.iter().map(|(cid, _)| self.pair_vector(cid)).collect::<Result<Vec<_>>>()?;
        let pair_mean = mean_vector(&pairs);
        let pair_dim = pair_mean.dim();
        let values = match model {
            Some(_) => {
                let encs =
                    feedback.iter().map(|(_, author)| self.commenter_vector(author)).collect::<Result<Vec<_>>>()?;
                pair_mean.concat(&mean_vector(&encs))
            }
            None => pair_mean,
        };
        Ok(ReaderVector { kind, values, pair_dim })
    }

    /// The head input `x` for one (reader, comment) pair.
    pub fn input_vector(&mut self, kind: ModelKind, reader_id: &str, comment_id: &str) -> Result<EmbeddingVector> {
        let target = self.target_vector(kind, comment_id)?;
        if !kind.is_personalized() {
            return Ok(target.values);
        }
        let reader = self.reader_vector(kind, reader_id)?;
        Ok(target.values.concat(&reader.values))
    }
}

fn mean_vector(vs: &[EmbeddingVector]) -> EmbeddingVector {
    EmbeddingVector::new(mean_of(vs.iter().map(|v| v.as_slice())).unwrap_or_default())
        .expect("mean of finite vectors is finite")
}

/// See [`Featurizer::target_vector`].
pub fn target_vector<E: PairEncoder + ?Sized>(
    kind: ModelKind,
    comment_id: &str,
    store: &CorpusStore,
    encoder: &E,
    commenter_model: Option<&CommenterModel>,
) -> Result<TargetVector> {
    Featurizer::new(store, encoder, commenter_model, DEFAULT_FEEDBACK_CAP)?.target_vector(kind, comment_id)
}

/// See [`Featurizer::reader_vector`].
pub fn reader_vector<E: PairEncoder + ?Sized>(
    kind: ModelKind,
    reader_id: &str,
    store: &CorpusStore,
    encoder: &E,
    commenter_model: Option<&CommenterModel>,
    cap: usize,
) -> Result<ReaderVector> {
    Featurizer::new(store, encoder, commenter_model, cap)?.reader_vector(kind, reader_id)
}

/// One labelled example; the input is stored as shared target/reader parts.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub reader_id: String,
    pub comment_id: String,
    pub label: Label,
    target: usize,
    reader: Option<usize>,
}

/// Borrowed view of an input `x = target ⊕ reader`.
#[derive(Debug, Clone, Copy)]
pub struct InputParts<'a> {
    pub target: &'a [f64],
    pub reader: Option<&'a [f64]>,
}

impl InputParts<'_> {
    pub fn dim(&self) -> usize {
        self.target.len() + self.reader.map_or(0, <[f64]>::len)
    }

    pub fn to_vector(&self) -> EmbeddingVector {
        let mut v = self.target.to_vec();
        if let Some(r) = self.reader {
            v.extend_from_slice(r);
        }
        EmbeddingVector::new(v).expect("parts are finite")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    pub kind: ModelKind,
    pub examples: Vec<Example>,
    targets: Vec<EmbeddingVector>,
    readers: Vec<EmbeddingVector>,
    pub encoder_fingerprint: u64,
    pub commenter_fingerprint: Option<u64>,
}

impl TrainingSet {
    pub fn new(kind: ModelKind, encoder_fingerprint: u64, commenter_fingerprint: Option<u64>) -> Self {
        Self {
            kind,
            examples: Vec::new(),
            targets: Vec::new(),
            readers: Vec::new(),
            encoder_fingerprint,
            commenter_fingerprint,
        }
    }

    /// Appends an example from explicit vectors (no sharing).
    pub fn push(
        &mut self,
        target: EmbeddingVector,
        reader: Option<EmbeddingVector>,
        label: Label,
        reader_id: &str,
        comment_id: &str,
    ) -> Result<()> {
        if reader.is_some() != self.kind.is_personalized() {
            return Err(Error::UnsupportedKind(self.kind.as_str()));
        }
        let dim = target.dim() + reader.as_ref().map_or(0, EmbeddingVector::dim);
        if !self.is_empty() && dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: dim });
        }
        self.targets.push(target);
        let reader = reader.map(|r| {
            self.readers.push(r);
            self.readers.len() - 1
        });
        self.examples.push(Example {
            reader_id: String::from(reader_id),
            comment_id: String::from(comment_id),
            label,
            target: self.targets.len() - 1,
            reader,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn input(&self, i: usize) -> InputParts<'_> {
        let e = &self.examples[i];
        InputParts { target: &self.targets[e.target], reader: e.reader.map(|r| self.readers[r].as_slice()) }
    }

    /// Materialized `x` for example `i`.
    pub fn x(&self, i: usize) -> EmbeddingVector {
        self.input(i).to_vector()
    }

    pub fn dim(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            self.input(0).dim()
        }
    }

    pub fn positives(&self) -> usize {
        self.examples.iter().filter(|e| e.label.is_offensive()).count()
    }
}

/// Labelled examples for every eligible reader's ratings in `ratings`.
pub fn build_training_set<E: PairEncoder + ?Sized>(
    kind: ModelKind,
    featurizer: &mut Featurizer<'_, E>,
    ratings: &[RatingRecord],
    eligibility_min: usize,
) -> Result<TrainingSet> {
    let store = featurizer.store();
    let commenter_fp = if kind.needs_commenter_model() { featurizer.commenter_fingerprint() } else { None };
    let mut set = TrainingSet::new(kind, featurizer.encoder_fingerprint(), commenter_fp);
    let mut target_idx: BTreeMap<String, usize> = BTreeMap::new();
    let mut reader_idx: BTreeMap<String, usize> = BTreeMap::new();
    for r in ratings {
        if store.feedback_count(&r.reader_id) < eligibility_min.max(1) {
            continue;
        }
        let t = match target_idx.get(&r.comment_id) {
            Some(&i) => i,
            None => {
                set.targets.push(featurizer.target_vector(kind, &r.comment_id)?.values);
                target_idx.insert(r.comment_id.clone(), set.targets.len() - 1);
                set.targets.len() - 1
            }
        };
        let reader = if kind.is_personalized() {
            Some(match reader_idx.get(&r.reader_id) {
                Some(&i) => i,
                None => {
                    set.readers.push(featurizer.reader_vector(kind, &r.reader_id)?.values);
                    reader_idx.insert(r.reader_id.clone(), set.readers.len() - 1);
                    set.readers.len() - 1
                }
            })
        } else {
            None
        };
        set.examples.push(Example {
            reader_id: r.reader_id.clone(),
            comment_id: r.comment_id.clone(),
            label: r.label()?,
            target: t,
            reader,
        });
    }
    if set.is_empty() {
        return Err(Error::NoEligibleReaders(eligibility_min));
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeadConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub l2: f64,
    /// Loss weight on positive examples.
    pub positive_weight: f64,
    /// Adds the elementwise product of the target and reader halves.
    pub interaction: bool,
    /// Untied trainable projections of the target and reader halves.
    pub tower_dim: Option<usize>,
    pub seed: u64,
}

impl Default for HeadConfig {
    fn default() -> Self {
        Self {
            epochs: 30,
            learning_rate: 0.5,
            batch_size: 32,
            l2: 0.0,
            positive_weight: 1.0,
            interaction: true,
            tower_dim: None,
            seed: 0,
        }
    }
}

impl HeadConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(String::from(m)));
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if !(self.positive_weight.is_finite() && self.positive_weight > 0.0) {
            return bad("positive_weight must be positive");
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return bad("l2 must be non-negative");
        }
        if self.tower_dim == Some(0) {
            return bad("tower_dim must be >= 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Towers {
    pub target: Matrix,
    pub reader: Option<Matrix>,
}

/// `sigmoid(w · f + b + v · (f_target ⊙ f_reader))` where `f` is the input,
/// optionally passed through per-half tower projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffensiveHead {
    pub kind: ModelKind,
    pub input_dim: usize,
    pub config: HeadConfig,
    pub towers: Option<Towers>,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub interaction: Vec<f64>,
    pub encoder_fingerprint: u64,
    pub commenter_fingerprint: Option<u64>,
}

/// Gradient of the loss with respect to every head parameter, flattened in
/// [`OffensiveHead::parameters`] order.
pub type HeadGradient = Vec<f64>;

impl OffensiveHead {
    pub fn init(
        kind: ModelKind,
        input_dim: usize,
        config: HeadConfig,
        encoder_fingerprint: u64,
        commenter_fingerprint: Option<u64>,
    ) -> Result<Self> {
        config.validate()?;
        let personalized = kind.is_personalized();
        if input_dim == 0 || (personalized && !input_dim.is_multiple_of(2)) {
            return Err(Error::InvalidConfig(alloc::format!("input_dim {input_dim} does not fit kind {kind}")));
        }
        let half = if personalized { input_dim / 2 } else { input_dim };
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let towers = config.tower_dim.map(|q| {
            let limit = libm::sqrt(3.0 / half as f64);
            let mut m = || Matrix::from_fn(q, half, |_, _| rng.random_range(-limit..limit));
            Towers { target: m(), reader: personalized.then(m) }
        });
        let feat_half = config.tower_dim.unwrap_or(half);
        let feat_dim = if personalized { 2 * feat_half } else { feat_half };
        let interaction = if personalized && config.interaction { vec![0.0; feat_half] } else { Vec::new() };
        Ok(Self {
            kind,
            input_dim,
            config,
            towers,
            weights: vec![0.0; feat_dim],
            bias: 0.0,
            interaction,
            encoder_fingerprint,
            commenter_fingerprint,
        })
    }

    fn split<'x>(&self, x: &'x [f64]) -> Result<InputParts<'x>> {
        if x.len() != self.input_dim {
            return Err(Error::DimensionMismatch { expected: self.input_dim, actual: x.len() });
        }
        Ok(if self.kind.is_personalized() {
            let (t, r) = x.split_at(self.input_dim / 2);
            InputParts { target: t, reader: Some(r) }
        } else {
            InputParts { target: x, reader: None }
        })
    }

    fn check_parts(&self, parts: &InputParts<'_>) -> Result<()> {
        let ok = match (self.kind.is_personalized(), parts.reader) {
            (true, Some(r)) => parts.target.len() == self.input_dim / 2 && r.len() == parts.target.len(),
            (false, None) => parts.target.len() == self.input_dim,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.input_dim, actual: parts.dim() })
        }
    }

    /// Tower outputs (or the raw halves) for one input.
    fn features(&self, parts: &InputParts<'_>) -> (Vec<f64>, Option<Vec<f64>>) {
        match &self.towers {
            Some(t) => (
                t.target.matvec(parts.target),
                match (&t.reader, parts.reader) {
                    (Some(m), Some(r)) => Some(m.matvec(r)),
                    _ => None,
                },
            ),
            None => (parts.target.to_vec(), parts.reader.map(<[f64]>::to_vec)),
        }
    }

    fn logit(&self, ft: &[f64], fr: Option<&[f64]>) -> f64 {
        let half = ft.len();
        let mut z = self.bias + dot(&self.weights[..half], ft);
        if let Some(fr) = fr {
            z += dot(&self.weights[half..], fr);
            for ((v, a), b) in self.interaction.iter().zip(ft).zip(fr) {
                z += v * a * b;
            }
        }
        z
    }

    /// Offensive probability for a flat input `x`.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        let parts = self.split(x)?;
        self.predict_parts(&parts)
    }

    pub fn predict_parts(&self, parts: &InputParts<'_>) -> Result<f64> {
        self.check_parts(parts)?;
        let (ft, fr) = self.features(parts);
        Ok(clamp_probability(sigmoid(self.logit(&ft, fr.as_deref()))))
    }

    /// Weighted binary cross-entropy for one example and its gradient,
    /// accumulated into `grad` (flattened parameter order).
    fn accumulate(&self, parts: &InputParts<'_>, label: Label, grad: &mut [f64]) -> f64 {
        let (ft, fr) = self.features(parts);
        let z = self.logit(&ft, fr.as_deref());
        let p = sigmoid(z);
        let y = label.as_f64();
        let pw = self.config.positive_weight;
        let loss = pw * y * softplus(-z) + (1.0 - y) * softplus(z);
        let g = (1.0 - y) * p - pw * y * (1.0 - p);

        let half = ft.len();
        // parameter order: towers, weights, bias, interaction
        let tower_len = self
            .towers
            .as_ref()
            .map_or(0, |t| t.target.as_slice().len() + t.reader.as_ref().map_or(0, |m| m.as_slice().len()));
        let (tower_grad, rest) = grad.split_at_mut(tower_len);
        let (w_grad, rest) = rest.split_at_mut(self.weights.len());
        let (b_grad, v_grad) = rest.split_at_mut(1);

        for (gw, f) in w_grad[..half].iter_mut().zip(&ft) {
            *gw += g * f;
        }
        if let Some(fr) = &fr {
            for (gw, f) in w_grad[half..].iter_mut().zip(fr) {
                *gw += g * f;
            }
            for ((gv, a), b) in v_grad.iter_mut().zip(&ft).zip(fr) {
                *gv += g * a * b;
            }
        }
        b_grad[0] += g;

        if self.towers.is_some() {
            // d loss / d tower output, for each half
            let v_at = |i: usize| self.interaction.get(i).copied().unwrap_or(0.0);
            let dft: Vec<f64> =
                (0..half).map(|i| g * (self.weights[i] + v_at(i) * fr.as_ref().map_or(0.0, |r| r[i]))).collect();
            let cols = parts.target.len();
            let (gt, gr) = tower_grad.split_at_mut(half * cols);
            add_outer_flat(gt, cols, &dft, parts.target);
            if let (Some(r), Some(_)) = (parts.reader, &fr) {
                let dfr: Vec<f64> = (0..half).map(|i| g * (self.weights[half + i] + v_at(i) * ft[i])).collect();
                add_outer_flat(gr, cols, &dfr, r);
            }
        }
        loss
    }

    /// Mean loss and gradient over the given examples of `set`.
    pub fn loss_and_gradient(&self, set: &TrainingSet, indices: &[usize]) -> Result<(f64, HeadGradient)> {
        let mut grad = vec![0.0; self.parameter_count()];
        if indices.is_empty() {
            return Ok((0.0, grad));
        }
        let mut loss = 0.0;
        for &i in indices {
            let parts = set.input(i);
            self.check_parts(&parts)?;
            loss += self.accumulate(&parts, set.examples[i].label, &mut grad);
        }
        let scale = 1.0 / indices.len() as f64;
        for g in grad.iter_mut() {
            *g *= scale;
        }
        Ok((loss * scale, grad))
    }

    pub fn parameter_count(&self) -> usize {
        self.parameters().len()
    }

    /// Towers (target, reader), weights, bias, interaction.
    pub fn parameters(&self) -> Vec<f64> {
        let mut p = Vec::new();
        if let Some(t) = &self.towers {
            p.extend_from_slice(t.target.as_slice());
            if let Some(r) = &t.reader {
                p.extend_from_slice(r.as_slice());
            }
        }
        p.extend_from_slice(&self.weights);
        p.push(self.bias);
        p.extend_from_slice(&self.interaction);
        p
    }

    pub fn set_parameters(&mut self, values: &[f64]) -> Result<()> {
        let n = self.parameter_count();
        if values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: values.len() });
        }
        let mut it = values.iter().copied();
        if let Some(t) = &mut self.towers {
            for p in t.target.as_mut_slice() {
                *p = it.next().unwrap_or_default();
            }
            if let Some(r) = &mut t.reader {
                for p in r.as_mut_slice() {
                    *p = it.next().unwrap_or_default();
                }
            }
        }
        for p in &mut self.weights {
            *p = it.next().unwrap_or_default();
        }
        self.bias = it.next().unwrap_or_default();
        for p in &mut self.interaction {
            *p = it.next().unwrap_or_default();
        }
        Ok(())
    }

    fn sgd_step(&mut self, grad: &[f64]) {
        let lr = self.config.learning_rate;
        let l2 = self.config.l2;
        let mut params = self.parameters();
        for (p, g) in params.iter_mut().zip(grad) {
            *p -= lr * (g + l2 * *p);
        }
        self.set_parameters(&params).expect("same length");
    }

    pub fn is_finite(&self) -> bool {
        self.parameters().iter().all(|v| v.is_finite())
    }

    /// Checks that this head was trained on the given encoder and commenter
    /// model.
    pub fn validate_fingerprints(&self, encoder: u64, commenter: Option<u64>) -> Result<()> {
        if self.encoder_fingerprint != encoder {
            return Err(Error::FingerprintMismatch {
                artifact: "encoder",
                expected: self.encoder_fingerprint,
                found: encoder,
            });
        }
        if self.kind.needs_commenter_model() {
            let expected = self.commenter_fingerprint.unwrap_or_default();
            let found = commenter.ok_or(Error::MissingCommenterModel)?;
            if expected != found {
                return Err(Error::FingerprintMismatch { artifact: "commenter model", expected, found });
            }
        }
        Ok(())
    }

    /// Scores every example of a set.
    pub fn score_set(&self, set: &TrainingSet) -> Result<Vec<ScoredExample>> {
        (0..set.len())
            .map(|i| {
                let e = &set.examples[i];
                Ok(ScoredExample {
                    reader_id: e.reader_id.clone(),
                    comment_id: e.comment_id.clone(),
                    score: self.predict_parts(&set.input(i))?,
                    label: e.label,
                })
            })
            .collect()
    }
}

/// `m += u xᵀ` for a row-major slice with `cols` columns.
fn add_outer_flat(m: &mut [f64], cols: usize, u: &[f64], x: &[f64]) {
    for (row, &ui) in m.chunks_exact_mut(cols).zip(u) {
        if ui != 0.0 {
            axpy(ui, x, row);
        }
    }
}

/// Keeps probabilities strictly inside (0, 1).
fn clamp_probability(p: f64) -> f64 {
    const EPS: f64 = 1e-15;
    p.clamp(EPS, 1.0 - EPS)
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + libm::log1p(libm::exp(-z.abs()))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct HeadTrainingReport {
    pub loss_history: Vec<f64>,
    /// Validation AP per epoch (`None` when validation has no positives).
    pub validation_ap: Vec<Option<f64>>,
    pub best_epoch: usize,
}

/// Seeded mini-batch SGD on weighted binary cross-entropy. Keeps the epoch
/// with the best validation AP; falls back to validation loss when the
/// validation set has no positives, and to the last epoch when it is empty.
pub fn train_head(
    train: &TrainingSet,
    validation: &TrainingSet,
    config: &HeadConfig,
) -> Result<(OffensiveHead, HeadTrainingReport)> {
    if train.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if !validation.is_empty() && (validation.dim() != train.dim() || validation.kind != train.kind) {
        return Err(Error::DimensionMismatch { expected: train.dim(), actual: validation.dim() });
    }
    let mut head = OffensiveHead::init(
        train.kind,
        train.dim(),
        config.clone(),
        train.encoder_fingerprint,
        train.commenter_fingerprint,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x0ffe_751e);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let all_val: Vec<usize> = (0..validation.len()).collect();
    let val_has_pos = validation.positives() > 0;
    let mut report = HeadTrainingReport::default();
    // higher is better
    let mut best: Option<(f64, OffensiveHead)> = None;

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(config.batch_size) {
            let (loss, grad) = head.loss_and_gradient(train, batch)?;
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            total += loss * batch.len() as f64;
            head.sgd_step(&grad);
        }
        if !head.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        report.loss_history.push(total / train.len() as f64);

        if validation.is_empty() {
            report.validation_ap.push(None);
            report.best_epoch = epoch;
            continue;
        }
        let quality = if val_has_pos {
            let ap = average_precision(&head.score_set(validation)?)?;
            report.validation_ap.push(Some(ap));
            ap
        } else {
            report.validation_ap.push(None);
            -head.loss_and_gradient(validation, &all_val)?.0
        };
        if best.as_ref().is_none_or(|(b, _)| quality > *b) {
            best = Some((quality, head.clone()));
            report.best_epoch = epoch;
        }
    }
    if let Some((_, h)) = best {
        head = h;
    }
    Ok((head, report))
}
