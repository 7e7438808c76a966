//! Text-pair encoders: `(news, comment)` to a fixed-dimension vector.
//!
//! Every encoder sees the canonical input `[CLS] news [SEP] comment [SEP]`.
//! [`HashingEncoder`] hashes character n-grams of that string with seeded
//! FNV-1a (signed feature hashing); [`PrecomputedEncoder`] serves vectors
//! produced elsewhere, keyed by `(news_id, comment_id)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, CorpusStore};
use crate::hash::Fnv1a;
use crate::linalg::norm;
use crate::textprep::{clean_comment, clean_news, CleanText};
use crate::{Error, Result};

/// A finite real vector.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidRecord(format!("non-finite embedding entry {v}")));
        }
        Ok(Self(values))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// `self ⊕ other`.
    pub fn concat(&self, other: &EmbeddingVector) -> EmbeddingVector {
        let mut v = Vec::with_capacity(self.dim() + other.dim());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        EmbeddingVector(v)
    }

    pub(crate) fn from_trusted(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self(values)
    }
}

impl Deref for EmbeddingVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Identifies a pair for encoders that look vectors up instead of computing
/// them from text.
#[derive(Debug, Clone, Copy)]
pub struct PairInput<'a> {
    pub news_id: &'a str,
    pub comment_id: &'a str,
    pub news_text: &'a CleanText,
    pub comment_text: &'a CleanText,
}

/// Any deterministic text-pair encoder with a fixed output dimension.
pub trait PairEncoder {
    fn dim(&self) -> usize;

    fn encode(&self, pair: &PairInput<'_>) -> Result<EmbeddingVector>;

    /// Identifies the encoder's behaviour; stored in trained artifacts.
    fn fingerprint(&self) -> u64;

    fn encode_batch(&self, pairs: &[PairInput<'_>]) -> Result<Vec<EmbeddingVector>> {
        pairs.iter().map(|p| self.encode(p)).collect()
    }
}

impl<E: PairEncoder + ?Sized> PairEncoder for &E {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn encode(&self, pair: &PairInput<'_>) -> Result<EmbeddingVector> {
        (**self).encode(pair)
    }

    fn fingerprint(&self) -> u64 {
        (**self).fingerprint()
    }
}

/// Cleans a stored comment and its news text, then encodes the pair.
pub fn encode_stored_comment<E: PairEncoder + ?Sized>(
    encoder: &E,
    store: &CorpusStore,
    comment: &Comment,
) -> Result<EmbeddingVector> {
    let news = store.news_of(comment)?;
    let news_text = clean_news(&news.text);
    let comment_text = clean_comment(&comment.text);
    let v = encoder.encode(&PairInput {
        news_id: &news.id,
        comment_id: &comment.id,
        news_text: &news_text,
        comment_text: &comment_text,
    })?;
    if v.dim() != encoder.dim() {
        return Err(Error::DimensionMismatch { expected: encoder.dim(), actual: v.dim() });
    }
    Ok(v)
}

/// The canonical joined input string.
pub fn joined_input(news: &str, comment: &str) -> String {
    format!("[CLS] {news} [SEP] {comment} [SEP]")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct EncoderConfig {
    pub dim: usize,
    pub ngram_min: usize,
    pub ngram_max: usize,
    pub hash_seed: u64,
    pub normalize: bool,
}

impl Default for EncoderConfig {
    fn default() -> Self {
        Self { dim: 256, ngram_min: 2, ngram_max: 4, hash_seed: 0, normalize: true }
    }
}

impl EncoderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::InvalidConfig(format!("encoder dim must be >= 2, got {}", self.dim)));
        }
        if self.ngram_min < 1 || self.ngram_min > self.ngram_max {
            return Err(Error::InvalidConfig(format!(
                "n-gram bounds must satisfy 1 <= min <= max, got {}..={}",
                self.ngram_min, self.ngram_max
            )));
        }
        Ok(())
    }
}

/// Signed character n-gram feature hashing.
#[derive(Debug, Clone)]
pub struct HashingEncoder {
    config: EncoderConfig,
}

impl HashingEncoder {
    pub fn new(config: EncoderConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self { config })
    }

    pub fn config(&self) -> &EncoderConfig {
        &self.config
    }

    /// Bucket index and sign for one n-gram.
    pub fn bucket(&self, ngram: &str) -> (usize, f64) {
        let mut h = Fnv1a::with_seed(self.config.hash_seed);
        h.write(ngram.as_bytes());
        let hash = h.finish();
        let sign = if hash >> 63 == 0 { 1.0 } else { -1.0 };
        ((hash % self.config.dim as u64) as usize, sign)
    }

    pub fn encode_pair(&self, news: &CleanText, comment: &CleanText) -> EmbeddingVector {
        self.encode_text(&joined_input(news.as_str(), comment.as_str()))
    }

    fn encode_text(&self, text: &str) -> EmbeddingVector {
        let mut out = vec![0.0; self.config.dim];
        // char boundaries, plus the end offset
        let bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).chain(core::iter::once(text.len())).collect();
        let n_chars = bounds.len() - 1;
        for n in self.config.ngram_min..=self.config.ngram_max {
            if n > n_chars {
                break;
            }
            for start in 0..=(n_chars - n) {
                let gram = &text[bounds[start]..bounds[start + n]];
                let (idx, sign) = self.bucket(gram);
                out[idx] += sign;
            }
        }
        if self.config.normalize {
            let len = norm(&out);
            if len > 0.0 {
                for v in out.iter_mut() {
                    *v /= len;
                }
            }
        }
        EmbeddingVector::from_trusted(out)
    }
}

impl PairEncoder for HashingEncoder {
    fn dim(&self) -> usize {
        self.config.dim
    }

    fn encode(&self, pair: &PairInput<'_>) -> Result<EmbeddingVector> {
        Ok(self.encode_pair(pair.news_text, pair.comment_text))
    }

    fn fingerprint(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.write_str("hashing-ngram");
        h.write_u64(self.config.dim as u64);
        h.write_u64(self.config.ngram_min as u64);
        h.write_u64(self.config.ngram_max as u64);
        h.write_u64(self.config.hash_seed);
        h.write_u64(u64::from(self.config.normalize));
        h.finish()
    }
}

/// One line of an external embedding file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalEmbedding {
    pub news_id: String,
    pub comment_id: String,
    pub vector: Vec<f64>,
}

/// Serves vectors computed by an external model.
#[derive(Debug, Clone)]
pub struct PrecomputedEncoder {
    dim: usize,
    vectors: BTreeMap<(String, String), EmbeddingVector>,
    fingerprint: u64,
}

impl PrecomputedEncoder {
    pub fn from_entries(entries: impl IntoIterator<Item = ExternalEmbedding>) -> Result<Self> {
        let mut dim = None;
        let mut vectors = BTreeMap::new();
        for e in entries {
            let d = *dim.get_or_insert(e.vector.len());
            if e.vector.len() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: e.vector.len() });
            }
            let key = (e.news_id, e.comment_id);
            if vectors.contains_key(&key) {
                return Err(Error::DuplicateId { kind: "embedding", id: format!("{}/{}", key.0, key.1) });
            }
            vectors.insert(key, EmbeddingVector::new(e.vector)?);
        }
        let dim = dim.ok_or(Error::Empty("embedding file"))?;
        if dim == 0 {
            return Err(Error::InvalidConfig(String::from("embedding dim must be positive")));
        }
        let mut h = Fnv1a::new();
        h.write_str("precomputed");
        h.write_u64(dim as u64);
        for ((n, c), v) in &vectors {
            h.write_str(n);
            h.write_str(c);
            for x in v.iter() {
                h.write_f64(*x);
            }
        }
        Ok(Self { dim, vectors, fingerprint: h.finish() })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn lookup(&self, news_id: &str, comment_id: &str) -> Result<&EmbeddingVector> {
        self.vectors.get(&(String::from(news_id), String::from(comment_id))).ok_or_else(|| Error::MissingEmbedding {
            news_id: String::from(news_id),
            comment_id: String::from(comment_id),
        })
    }
}

impl PairEncoder for PrecomputedEncoder {
    fn dim(&self) -> usize {
        self.dim
    }

    fn encode(&self, pair: &PairInput<'_>) -> Result<EmbeddingVector> {
        self.lookup(pair.news_id, pair.comment_id).cloned()
    }

    fn fingerprint(&self) -> u64 {
        self.fingerprint
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enc() -> HashingEncoder {
        HashingEncoder::new(EncoderConfig::default()).unwrap()
    }

    /// Independent byte-at-a-time FNV-1a 64 straight from the published
    /// algorithm, without the seed folding.
    fn reference_fnv1a(bytes: &[u8]) -> u64 {
        let mut hash: u64 = 14695981039346656037;
        for b in bytes {
            hash ^= *b as u64;
            hash = hash.wrapping_mul(1099511628211);
        }
        hash
    }

    #[test]
    fn bucket_matches_reference_hash() {
        let e = enc();
        let h = reference_fnv1a(b"ab");
        assert_eq!(h, 0x089c4407b545986a);
        let expected = ((h % 256) as usize, if h >> 63 == 0 { 1.0 } else { -1.0 });
        assert_eq!(e.bucket("ab"), expected);
        assert_eq!(expected, (106, 1.0));
    }

    #[test]
    fn deterministic_and_normalized() {
        let e = enc();
        let a = e.encode_pair(&clean_news("news"), &clean_comment("comment"));
        assert_eq!(a, e.encode_pair(&clean_news("news"), &clean_comment("comment")));
        assert!((norm(&a) - 1.0).abs() < 1e-9);
        let empty = e.encode_pair(&CleanText::default(), &CleanText::default());
        assert!((norm(&empty) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn joined_string_layout() {
        assert_eq!(joined_input("", ""), "[CLS]  [SEP]  [SEP]");
        assert_eq!(joined_input("n", "c"), "[CLS] n [SEP] c [SEP]");
    }

    #[test]
    fn unnormalized_counts_ngrams() {
        let e = HashingEncoder::new(EncoderConfig {
            dim: 1024,
            ngram_min: 2,
            ngram_max: 2,
            normalize: false,
            ..EncoderConfig::default()
        })
        .unwrap();
        let v = e.encode_pair(&CleanText::default(), &CleanText::default());
        let chars = joined_input("", "").chars().count();
        let abs_total: f64 = v.iter().map(|x| x.abs()).sum();
        // collisions can only cancel, never add
        assert!(abs_total <= (chars - 1) as f64);
        let signed_total: f64 = v.iter().sum();
        let mut oracle = 0.0;
        let s: Vec<char> = joined_input("", "").chars().collect();
        for w in s.windows(2) {
            let g: String = w.iter().collect();
            oracle += e.bucket(&g).1;
        }
        assert_eq!(signed_total, oracle);
    }

    #[test]
    fn swapping_texts_changes_vector() {
        let e = enc();
        let a = e.encode_pair(&clean_news("alpha beta"), &clean_comment("gamma"));
        let b = e.encode_pair(&clean_news("gamma"), &clean_comment("alpha beta"));
        assert_ne!(a, b);
    }

    #[test]
    fn config_validation() {
        let bad = EncoderConfig { dim: 1, ..EncoderConfig::default() };
        assert!(HashingEncoder::new(bad).is_err());
        let bad = EncoderConfig { ngram_min: 3, ngram_max: 2, ..EncoderConfig::default() };
        assert!(HashingEncoder::new(bad).is_err());
        let bad = EncoderConfig { ngram_min: 0, ..EncoderConfig::default() };
        assert!(HashingEncoder::new(bad).is_err());
    }

    #[test]
    fn fingerprint_tracks_config() {
        let a = enc();
        let b = HashingEncoder::new(EncoderConfig { hash_seed: 1, ..EncoderConfig::default() }).unwrap();
        assert_eq!(a.fingerprint(), enc().fingerprint());
        assert_ne!(a.fingerprint(), b.fingerprint());
    }

    fn pair<'a>(n: &'a CleanText, c: &'a CleanText) -> PairInput<'a> {
        PairInput { news_id: "n", comment_id: "c", news_text: n, comment_text: c }
    }

    #[test]
    fn batch_edge_cases() {
        let e = enc();
        assert!(e.encode_batch(&[]).unwrap().is_empty());
        let (n1, c1) = (clean_news("a"), clean_comment("b"));
        let (n2, c2) = (clean_news("c"), clean_comment("d"));
        let out = e.encode_batch(&[pair(&n1, &c1), pair(&n2, &c2)]).unwrap();
        assert_eq!(out, vec![e.encode_pair(&n1, &c1), e.encode_pair(&n2, &c2)]);
    }

    proptest! {
        #[test]
        fn batch_equals_loop(texts in proptest::collection::vec(("\\PC{0,20}", "\\PC{0,20}"), 0..100)) {
            let e = enc();
            let cleaned: Vec<(CleanText, CleanText)> =
                texts.iter().map(|(n, c)| (clean_news(n), clean_comment(c))).collect();
            let pairs: Vec<PairInput<'_>> = cleaned.iter().map(|(n, c)| pair(n, c)).collect();
            let batch = e.encode_batch(&pairs).unwrap();
            let looped: Vec<_> = cleaned.iter().map(|(n, c)| e.encode_pair(n, c)).collect();
            prop_assert_eq!(batch, looped);
        }

        #[test]
        fn unit_norm_and_fixed_dim(n in "\\PC{0,30}", c in "\\PC{0,30}") {
            let e = enc();
            let v = e.encode_pair(&clean_news(&n), &clean_comment(&c));
            prop_assert_eq!(v.dim(), 256);
            let len = norm(&v);
            prop_assert!(len == 0.0 || (len - 1.0).abs() < 1e-9);
        }
    }

    fn ext(n: &str, c: &str, dim: usize, fill: f64) -> ExternalEmbedding {
        ExternalEmbedding { news_id: n.into(), comment_id: c.into(), vector: vec![fill; dim] }
    }

    #[test]
    fn precomputed_lookup() {
        let e = PrecomputedEncoder::from_entries([ext("n1", "c1", 768, 0.5), ext("n1", "c2", 768, -0.5)]).unwrap();
        assert_eq!(e.dim(), 768);
        let t = CleanText::default();
        let v = e.encode(&PairInput { news_id: "n1", comment_id: "c2", news_text: &t, comment_text: &t });
        assert_eq!(v.unwrap()[0], -0.5);
        let missing = e.encode(&PairInput { news_id: "n2", comment_id: "c1", news_text: &t, comment_text: &t });
        assert!(matches!(missing, Err(Error::MissingEmbedding { .. })));
    }

    #[test]
    fn precomputed_dim_mismatch() {
        let err = PrecomputedEncoder::from_entries([ext("n1", "c1", 768, 0.0), ext("n1", "c2", 256, 0.0)]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 768, actual: 256 });
    }
}
