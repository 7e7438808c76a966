//! Commenter embeddings learned by predicting who wrote a `(news, comment)`
//! pair.
//!
//! The model is `softmax(head(tanh(projection(x))))` over a fixed roster of
//! commenters. Once trained, the hidden layer `tanh(projection(x))` is the
//! per-pair commenter representation, and [`CommenterModel::enc`] mean-pools
//! it over a commenter's most recent pairs.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::CorpusStore;
use crate::encoder::{encode_stored_comment, EmbeddingVector, PairEncoder};
use crate::hash::Fnv1a;
use crate::linalg::{mean_of, softmax_in_place, Matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CommenterModelConfig {
    /// Width of the hidden projection.
    pub proj_dim: usize,
    /// How many recent pairs are pooled into one commenter vector.
    pub docs_per_commenter: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub weight_decay: f64,
    pub seed: u64,
}

impl Default for CommenterModelConfig {
    fn default() -> Self {
        Self {
            proj_dim: 64,
            docs_per_commenter: 5,
            epochs: 40,
            learning_rate: 0.5,
            batch_size: 32,
            weight_decay: 0.0,
            seed: 0,
        }
    }
}

impl CommenterModelConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(String::from(m)));
        if self.proj_dim == 0 {
            return bad("proj_dim must be >= 1");
        }
        if self.docs_per_commenter == 0 {
            return bad("docs_per_commenter must be >= 1");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be >= 1");
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return bad("learning_rate must be positive");
        }
        if !(self.weight_decay.is_finite() && self.weight_decay >= 0.0) {
            return bad("weight_decay must be non-negative");
        }
        Ok(())
    }
}

/// Per-commenter sample sizes for the three partitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
}

impl SplitCounts {
    pub fn per_user(&self) -> usize {
        self.train + self.validation + self.test
    }
}

impl Default for SplitCounts {
    fn default() -> Self {
        Self { train: 40, validation: 5, test: 5 }
    }
}

/// `(x, roster index)` examples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommenterDataset {
    pub examples: Vec<(EmbeddingVector, usize)>,
}

impl CommenterDataset {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommenterDatasets {
    pub roster: Vec<String>,
    pub train: CommenterDataset,
    pub validation: CommenterDataset,
    pub test: CommenterDataset,
}

/// Samples `counts.per_user()` comments from every commenter with more than
/// `min_comments` comments and splits them per commenter.
pub fn build_commenter_dataset<E: PairEncoder + ?Sized>(
    store: &CorpusStore,
    encoder: &E,
    min_comments: usize,
    counts: SplitCounts,
    seed: u64,
) -> Result<CommenterDatasets> {
    let per_user = counts.per_user();
    if per_user == 0 || per_user > min_comments + 1 {
        return Err(Error::InvalidConfig(alloc::format!(
            "per-user sample {per_user} must be in 1..={}",
            min_comments + 1
        )));
    }
    let roster: Vec<String> =
        store.commenters().map(|c| c.id).filter(|id| store.comments_by(id).len() > min_comments).collect();
    if roster.is_empty() {
        return Err(Error::NoEligibleCommenters(min_comments));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = CommenterDatasets { roster, ..Default::default() };
    for (label, id) in out.roster.iter().enumerate() {
        let mut comments = store.comments_by(id);
        comments.sort_by(|a, b| a.id.cmp(&b.id));
        comments.shuffle(&mut rng);
        for (i, c) in comments.into_iter().take(per_user).enumerate() {
            let x = encode_stored_comment(encoder, store, c)?;
            let part = if i < counts.train {
                &mut out.train
            } else if i < counts.train + counts.validation {
                &mut out.validation
            } else {
                &mut out.test
            };
            part.examples.push((x, label));
        }
    }
    Ok(out)
}

/// An affine map `W x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl Affine {
    fn xavier(rng: &mut ChaCha8Rng, outputs: usize, inputs: usize) -> Self {
        let limit = libm::sqrt(6.0 / (inputs + outputs) as f64);
        let weights = Matrix::from_fn(outputs, inputs, |_, _| rng.random_range(-limit..limit));
        Self { weights, bias: vec![0.0; outputs] }
    }

    fn zeros_like(&self) -> Self {
        Self { weights: Matrix::zeros(self.weights.rows(), self.weights.cols()), bias: vec![0.0; self.bias.len()] }
    }

    fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        self.weights.matvec_into(x, out);
        for (o, b) in out.iter_mut().zip(&self.bias) {
            *o += b;
        }
    }

    fn params(&self) -> impl Iterator<Item = &f64> {
        self.weights.as_slice().iter().chain(self.bias.iter())
    }

    fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.weights.as_mut_slice().iter_mut().chain(self.bias.iter_mut())
    }
}

/// Gradient buffers shaped like the model's parameters.
#[derive(Debug, Clone)]
pub struct CommenterGradients {
    pub projection: Affine,
    pub head: Affine,
}

impl CommenterGradients {
    pub fn flatten(&self) -> Vec<f64> {
        self.projection.params().chain(self.head.params()).copied().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommenterModel {
    pub config: CommenterModelConfig,
    pub roster: Vec<String>,
    pub projection: Affine,
    pub head: Affine,
    pub base_encoder_fingerprint: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommenterTrainingReport {
    /// Mean training cross-entropy per epoch.
    pub loss_history: Vec<f64>,
    pub validation_accuracy: Vec<f64>,
    /// Zero-based epoch whose parameters were kept.
    pub best_epoch: usize,
}

impl CommenterModel {
    /// Randomly initialized model (Xavier-uniform weights, zero biases).
    pub fn init(
        config: CommenterModelConfig,
        roster: Vec<String>,
        input_dim: usize,
        base_encoder_fingerprint: u64,
    ) -> Result<Self> {
        config.validate()?;
        if roster.is_empty() {
            return Err(Error::Empty("commenter roster"));
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for id in &roster {
            if !seen.insert(id) {
                return Err(Error::DuplicateId { kind: "roster", id: id.clone() });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let projection = Affine::xavier(&mut rng, config.proj_dim, input_dim);
        let head = Affine::xavier(&mut rng, roster.len(), config.proj_dim);
        Ok(Self { config, roster, projection, head, base_encoder_fingerprint })
    }

    pub fn input_dim(&self) -> usize {
        self.projection.weights.cols()
    }

    pub fn proj_dim(&self) -> usize {
        self.projection.weights.rows()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: x.len() });
        }
        Ok(())
    }

    /// Hidden representation `tanh(W x + b)`.
    pub fn project(&self, x: &[f64]) -> Result<EmbeddingVector> {
        self.check_dim(x)?;
        Ok(EmbeddingVector::from_trusted(self.hidden(x)))
    }

    fn hidden(&self, x: &[f64]) -> Vec<f64> {
        let mut h = vec![0.0; self.proj_dim()];
        self.projection.apply_into(x, &mut h);
        for v in h.iter_mut() {
            *v = libm::tanh(*v);
        }
        h
    }

    /// Probability of each roster commenter having written the pair.
    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let h = self.hidden(x);
        let mut p = vec![0.0; self.roster.len()];
        self.head.apply_into(&h, &mut p);
        softmax_in_place(&mut p);
        Ok(p)
    }

    pub fn predict_index(&self, x: &[f64]) -> Result<usize> {
        let p = self.predict(x)?;
        let mut best = 0;
        for (i, v) in p.iter().enumerate() {
            if *v > p[best] {
                best = i;
            }
        }
        Ok(best)
    }

    pub fn accuracy(&self, data: &CommenterDataset) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::Empty("commenter dataset"));
        }
        let mut hits = 0usize;
        for (x, y) in &data.examples {
            if self.predict_index(x)? == *y {
                hits += 1;
            }
        }
        Ok(hits as f64 / data.len() as f64)
    }

    /// Commenter embedding: mean hidden vector over the commenter's
    /// `docs_per_commenter` most recent pairs.
    pub fn enc<E: PairEncoder + ?Sized>(
        &self,
        store: &CorpusStore,
        encoder: &E,
        commenter_id: &str,
    ) -> Result<EmbeddingVector> {
        let recent = store.recent_comments_by(commenter_id, self.config.docs_per_commenter);
        if recent.is_empty() {
            return Err(Error::NoComments(String::from(commenter_id)));
        }
        let hidden = recent
            .into_iter()
            .map(|c| self.project(&encode_stored_comment(encoder, store, c)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(pool(&hidden))
    }

    /// Mean cross-entropy over `examples` and its gradient.
    pub fn loss_and_gradients(&self, examples: &[(&[f64], usize)]) -> Result<(f64, CommenterGradients)> {
        let mut grads = CommenterGradients { projection: self.projection.zeros_like(), head: self.head.zeros_like() };
        if examples.is_empty() {
            return Ok((0.0, grads));
        }
        let k = self.roster.len();
        let mut p = vec![0.0; k];
        let mut dh = vec![0.0; self.proj_dim()];
        let mut loss = 0.0;
        for &(x, y) in examples {
            self.check_dim(x)?;
            if y >= k {
                return Err(Error::DimensionMismatch { expected: k, actual: y + 1 });
            }
            let h = self.hidden(x);
            self.head.apply_into(&h, &mut p);
            softmax_in_place(&mut p);
            loss -= libm::log(p[y].max(f64::MIN_POSITIVE));
            // dL/dlogits = p - onehot(y)
            p[y] -= 1.0;
            grads.head.weights.add_outer(1.0, &p, &h);
            for (g, d) in grads.head.bias.iter_mut().zip(&p) {
                *g += d;
            }
            dh.fill(0.0);
            self.head.weights.matvec_t_add(&p, &mut dh);
            for (d, hv) in dh.iter_mut().zip(&h) {
                *d *= 1.0 - hv * hv;
            }
            grads.projection.weights.add_outer(1.0, &dh, x);
            for (g, d) in grads.projection.bias.iter_mut().zip(&dh) {
                *g += d;
            }
        }
        let scale = 1.0 / examples.len() as f64;
        for g in grads.projection.params_mut().chain(grads.head.params_mut()) {
            *g *= scale;
        }
        Ok((loss * scale, grads))
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.projection.params().chain(self.head.params()).copied().collect()
    }

    pub fn set_parameters(&mut self, values: &[f64]) -> Result<()> {
        let n = self.parameters().len();
        if values.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: values.len() });
        }
        for (p, v) in self.projection.params_mut().chain(self.head.params_mut()).zip(values) {
            *p = *v;
        }
        Ok(())
    }

    fn sgd_step(&mut self, grads: &CommenterGradients, lr: f64, decay: f64) {
        let params = self.projection.params_mut().chain(self.head.params_mut());
        let g = grads.projection.params().chain(grads.head.params());
        for (p, g) in params.zip(g) {
            *p -= lr * (g + decay * *p);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.parameters().iter().all(|v| v.is_finite())
    }

    pub fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write_str("commenter-model");
        h.write_u64(self.base_encoder_fingerprint);
        h.write_u64(self.config.docs_per_commenter as u64);
        for id in &self.roster {
            h.write_str(id);
        }
        h.write_u64(self.input_dim() as u64);
        h.write_u64(self.proj_dim() as u64);
        for v in self.parameters() {
            h.write_f64(v);
        }
        h.finish()
    }
}

/// Mean pooling of hidden vectors.
pub fn pool(vectors: &[EmbeddingVector]) -> EmbeddingVector {
    let mean = mean_of(vectors.iter().map(|v| v.as_slice())).unwrap_or_default();
    EmbeddingVector::from_trusted(mean)
}

/// Seeded mini-batch SGD on cross-entropy. Keeps the parameters of the epoch
/// with the best validation accuracy (the last epoch when there is no
/// validation data).
pub fn train_commenter_model(
    datasets: &CommenterDatasets,
    config: &CommenterModelConfig,
    base_encoder_fingerprint: u64,
) -> Result<(CommenterModel, CommenterTrainingReport)> {
    if datasets.train.is_empty() {
        return Err(Error::Empty("commenter training set"));
    }
    let input_dim = datasets.train.examples[0].0.dim();
    let mut model = CommenterModel::init(config.clone(), datasets.roster.clone(), input_dim, base_encoder_fingerprint)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5eed_0fc0_ffee);
    let mut order: Vec<usize> = (0..datasets.train.len()).collect();
    let mut report = CommenterTrainingReport::default();
    let mut best: Option<(f64, CommenterModel)> = None;

    for epoch in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(config.batch_size) {
            let examples: Vec<(&[f64], usize)> = batch
                .iter()
                .map(|&i| {
                    let (x, y) = &datasets.train.examples[i];
                    (x.as_slice(), *y)
                })
                .collect();
            let (loss, grads) = model.loss_and_gradients(&examples)?;
            if !loss.is_finite() {
                return Err(Error::NonFiniteLoss { epoch });
            }
            total += loss * batch.len() as f64;
            model.sgd_step(&grads, config.learning_rate, config.weight_decay);
        }
        if !model.is_finite() {
            return Err(Error::NonFiniteLoss { epoch });
        }
        report.loss_history.push(total / datasets.train.len() as f64);

        if !datasets.validation.is_empty() {
            let acc = model.accuracy(&datasets.validation)?;
            report.validation_accuracy.push(acc);
            if best.as_ref().is_none_or(|(b, _)| acc > *b) {
                best = Some((acc, model.clone()));
                report.best_epoch = epoch;
            }
        } else {
            report.best_epoch = epoch;
        }
    }
    if let Some((_, m)) = best {
        model = m;
    }
    Ok((model, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::fixtures::*;
    use crate::encoder::{EncoderConfig, HashingEncoder};
    use alloc::format;
    use alloc::string::ToString;

    fn roster(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("u{i}")).collect()
    }

    /// Clusters around `3 · e_k` with noise of at most 0.05 per coordinate.
    /// The hyperplanes `x_k - x_j = 0` separate class k from class j with a
    /// margin of at least `3 - 0.1` before normalization.
    fn separable(classes: usize, per_class: usize, dim: usize, seed: u64) -> CommenterDataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut examples = Vec::new();
        for k in 0..classes {
            for _ in 0..per_class {
                let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.05..0.05)).collect();
                x[k] += 3.0;
                examples.push((EmbeddingVector::new(x).unwrap(), k));
            }
        }
        CommenterDataset { examples }
    }

    fn datasets(classes: usize, seed: u64) -> CommenterDatasets {
        CommenterDatasets {
            roster: roster(classes),
            train: separable(classes, 40, 12, seed),
            validation: separable(classes, 5, 12, seed + 1),
            test: separable(classes, 5, 12, seed + 2),
        }
    }

    fn small_config() -> CommenterModelConfig {
        CommenterModelConfig { proj_dim: 8, epochs: 50, learning_rate: 0.5, batch_size: 8, ..Default::default() }
    }

    #[test]
    fn separable_two_commenters() {
        let data = datasets(2, 1);
        let (model, report) = train_commenter_model(&data, &small_config(), 0).unwrap();
        assert_eq!(model.accuracy(&data.validation).unwrap(), 1.0);
        assert_eq!(report.loss_history.len(), 50);
        assert!(report.loss_history.last().unwrap() < &report.loss_history[0]);
        for (x, y) in &data.test.examples {
            assert_eq!(model.predict_index(x).unwrap(), *y);
        }
    }

    #[test]
    fn single_commenter() {
        let data = datasets(1, 3);
        let (model, _) = train_commenter_model(&data, &small_config(), 0).unwrap();
        assert_eq!(model.accuracy(&data.test).unwrap(), 1.0);
        assert_eq!(model.predict(&data.test.examples[0].0).unwrap(), vec![1.0]);
    }

    #[test]
    fn random_labels_at_chance() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut random = |n: usize| CommenterDataset {
            examples: (0..n)
                .map(|_| {
                    let x: Vec<f64> = (0..16).map(|_| rng.random_range(-1.0..1.0)).collect();
                    (EmbeddingVector::new(x).unwrap(), rng.random_range(0..8))
                })
                .collect(),
        };
        let data =
            CommenterDatasets { roster: roster(8), train: random(320), validation: random(40), test: random(400) };
        let cfg = CommenterModelConfig { epochs: 30, ..small_config() };
        let (model, _) = train_commenter_model(&data, &cfg, 0).unwrap();
        let acc = model.accuracy(&data.test).unwrap();
        assert!((acc - 0.125).abs() <= 0.1, "test accuracy {acc}");
    }

    #[test]
    fn predictions_are_distributions() {
        let model = CommenterModel::init(small_config(), roster(5), 12, 0).unwrap();
        for (x, _) in &separable(5, 3, 12, 4).examples {
            let p = model.predict(x).unwrap();
            assert!(p.iter().all(|v| *v >= 0.0));
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        assert!(matches!(model.predict(&[0.0; 3]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn duplicate_roster_rejected() {
        let r = vec!["a".to_string(), "a".to_string()];
        assert!(CommenterModel::init(small_config(), r, 4, 0).is_err());
    }

    #[test]
    fn deterministic_training() {
        let data = datasets(3, 5);
        let (a, _) = train_commenter_model(&data, &small_config(), 0).unwrap();
        let (b, _) = train_commenter_model(&data, &small_config(), 0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut model = CommenterModel::init(small_config(), roster(3), 5, 0).unwrap();
        let data = separable(3, 1, 5, 8);
        let examples: Vec<(&[f64], usize)> = data.examples.iter().map(|(x, y)| (x.as_slice(), *y)).collect();
        let (_, grads) = model.loss_and_gradients(&examples).unwrap();
        let analytic = grads.flatten();
        let base = model.parameters();
        let eps = 1e-6;
        for i in 0..base.len() {
            let mut p = base.clone();
            p[i] += eps;
            model.set_parameters(&p).unwrap();
            let up = model.loss_and_gradients(&examples).unwrap().0;
            p[i] -= 2.0 * eps;
            model.set_parameters(&p).unwrap();
            let down = model.loss_and_gradients(&examples).unwrap().0;
            let numeric = (up - down) / (2.0 * eps);
            let denom = analytic[i].abs().max(numeric.abs()).max(1e-8);
            assert!((analytic[i] - numeric).abs() / denom <= 1e-4, "param {i}: {} vs {numeric}", analytic[i]);
        }
    }

    fn store_for_enc() -> CorpusStore {
        let comments = (0..7)
            .map(|i| comment(&format!("c{i}"), "n1", "u1", &format!("text number {i}"), 100 - i * 10))
            .chain([comment("solo", "n1", "u2", "only one", 5)])
            .collect();
        CorpusStore::build(vec![news("n1", "headline", 0)], comments, vec![], vec![]).unwrap()
    }

    #[test]
    fn enc_single_comment_is_its_projection() {
        let store = store_for_enc();
        let encoder = HashingEncoder::new(EncoderConfig { dim: 16, ..Default::default() }).unwrap();
        let model = CommenterModel::init(small_config(), roster(2), 16, 0).unwrap();
        let e = model.enc(&store, &encoder, "u2").unwrap();
        let x = encode_stored_comment(&encoder, &store, store.comment("solo").unwrap()).unwrap();
        assert_eq!(e, model.project(&x).unwrap());
        assert!(matches!(model.enc(&store, &encoder, "nobody"), Err(Error::NoComments(_))));
    }

    #[test]
    fn enc_uses_most_recent_and_matches_oracle() {
        let store = store_for_enc();
        let encoder = HashingEncoder::new(EncoderConfig { dim: 16, ..Default::default() }).unwrap();
        let model = CommenterModel::init(small_config(), roster(2), 16, 0).unwrap();
        let e = model.enc(&store, &encoder, "u1").unwrap();
        // c0 is newest (t=100); the five most recent are c0..c4
        let mut sum = vec![0.0; 8];
        let mut projected = Vec::new();
        for i in 0..5 {
            let c = store.comment(&format!("c{i}")).unwrap();
            projected.push(model.project(&encode_stored_comment(&encoder, &store, c).unwrap()).unwrap());
        }
        for p in &projected {
            for (s, v) in sum.iter_mut().zip(p.iter()) {
                *s += v;
            }
        }
        for (a, b) in e.iter().zip(&sum) {
            assert!((a - b / 5.0).abs() < 1e-12);
            assert!((-1.0..=1.0).contains(a));
        }
        // pooling is order-free
        projected.reverse();
        assert_eq!(pool(&projected), e);
    }

    #[test]
    fn opposite_vectors_pool_to_zero() {
        let v = EmbeddingVector::new(vec![0.25, -0.5]).unwrap();
        let w = EmbeddingVector::new(vec![-0.25, 0.5]).unwrap();
        assert_eq!(pool(&[v, w]).as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn dataset_counts_and_determinism() {
        // 10 commenters; u0..u2 have 55 comments, the rest 10
        let mut comments = Vec::new();
        for u in 0..10 {
            let n = if u < 3 { 55 } else { 10 };
            for i in 0..n {
                comments.push(comment(&format!("c{u}_{i}"), "n1", &format!("u{u}"), &format!("w{i} by {u}"), i));
            }
        }
        let store = CorpusStore::build(vec![news("n1", "h", 0)], comments, vec![], vec![]).unwrap();
        let encoder = HashingEncoder::new(EncoderConfig { dim: 16, ..Default::default() }).unwrap();
        let d = build_commenter_dataset(&store, &encoder, 50, SplitCounts::default(), 7).unwrap();
        assert_eq!(d.roster, ["u0", "u1", "u2"]);
        assert_eq!((d.train.len(), d.validation.len(), d.test.len()), (120, 15, 15));
        assert_eq!(d, build_commenter_dataset(&store, &encoder, 50, SplitCounts::default(), 7).unwrap());
        assert_eq!(
            build_commenter_dataset(&store, &encoder, 60, SplitCounts::default(), 7).unwrap_err(),
            Error::NoEligibleCommenters(60)
        );
    }
}
