//! Synthetic corpora with known ground truth.
//!
//! Commenters carry a latent trait `t_u` and a base toxicity `τ_u`; readers
//! carry a sensitivity `s_r`. Comment text mixes topic words, filler, words
//! private to the commenter, words that spell out the trait, and toxic
//! lexicon tokens injected at rate `0.3·τ_u`. A reader's rating is the
//! ordinal cut of
//!
//! ```text
//! μ = base + α·⟨s_r, t_u⟩/√m + β·density(c) + N(0, noise_sd²)
//! ```
//!
//! at 1.5, 2.5, 3.5, 4.5. Feedback holds the ratings ≥ 4 on comments posted
//! in the first `feedback_window_fraction` of the timeline.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::corpus::{Comment, FeedbackRecord, NewsTweet, RatingRecord, Timestamp, OFFENSIVE_MIN_RATING};
use crate::linalg::dot;
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_readers: usize,
    pub n_commenters: usize,
    pub n_news: usize,
    pub comments_per_commenter: usize,
    pub latent_dim: usize,
    /// β
    pub lexicon_weight: f64,
    /// α
    pub affinity_weight: f64,
    pub noise_sd: f64,
    pub feedback_window_fraction: f64,
    pub seed: u64,
    /// Comments each reader rates (all comments when larger).
    pub ratings_per_reader: usize,
    /// When set, `base` is chosen so this fraction of ratings is ≥ 4.
    pub target_prevalence: Option<f64>,
    /// `base` when no target prevalence is set.
    pub base_level: f64,
    pub start: Timestamp,
    pub duration: Timestamp,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_readers: 60,
            n_commenters: 40,
            n_news: 120,
            comments_per_commenter: 60,
            latent_dim: 2,
            lexicon_weight: 4.0,
            affinity_weight: 2.0,
            noise_sd: 0.5,
            feedback_window_fraction: 0.3,
            seed: 0,
            ratings_per_reader: 300,
            target_prevalence: Some(0.3),
            base_level: 3.0,
            start: 1_600_000_000,
            duration: 180 * 86_400,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(String::from(m)));
        if [self.n_readers, self.n_commenters, self.n_news, self.comments_per_commenter, self.latent_dim].contains(&0) {
            return bad("synth counts must be >= 1");
        }
        if self.ratings_per_reader == 0 {
            return bad("ratings_per_reader must be >= 1");
        }
        if ![self.lexicon_weight, self.affinity_weight, self.noise_sd, self.base_level].iter().all(|v| v.is_finite())
            || self.noise_sd < 0.0
        {
            return bad("synth weights must be finite and noise_sd >= 0");
        }
        if !(0.0..=1.0).contains(&self.feedback_window_fraction) {
            return bad("feedback_window_fraction must lie in [0, 1]");
        }
        if self.target_prevalence.is_some_and(|p| !(0.0..=1.0).contains(&p)) {
            return bad("target_prevalence must lie in [0, 1]");
        }
        if self.duration <= 0 {
            return bad("duration must be positive");
        }
        Ok(())
    }
}

/// One line of the ground-truth file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TruthRecord {
    Commenter {
        id: String,
        traits: Vec<f64>,
        toxicity: f64,
    },
    Reader {
        id: String,
        sensitivity: Vec<f64>,
    },
    Rating {
        reader_id: String,
        comment_id: String,
        /// Noise-free ordinal mean.
        mean: f64,
        offensive_probability: f64,
        /// `⟨s_r, t_u⟩ / √m`.
        affinity: f64,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub base: f64,
    pub records: Vec<TruthRecord>,
}

impl GroundTruth {
    pub fn commenter_traits(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.records.iter().filter_map(|r| match r {
            TruthRecord::Commenter { id, traits, .. } => Some((id.as_str(), traits.as_slice())),
            _ => None,
        })
    }

    pub fn reader_sensitivities(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.records.iter().filter_map(|r| match r {
            TruthRecord::Reader { id, sensitivity } => Some((id.as_str(), sensitivity.as_slice())),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthCorpus {
    pub news: Vec<NewsTweet>,
    pub comments: Vec<Comment>,
    pub ratings: Vec<RatingRecord>,
    pub feedback: Vec<FeedbackRecord>,
    pub truth: GroundTruth,
}

const TOPICS: usize = 12;
const TOPIC_WORDS: usize = 10;
const FILLER_WORDS: usize = 40;
const PERSONAL_WORDS: usize = 6;
const TRAIT_WORDS: usize = 2;
const TOXIC_WORDS: usize = 12;
const TOXIC_RATE: f64 = 0.3;
// tokens per comment by source
const TOPIC_TOKENS: usize = 2;
const FILLER_TOKENS: usize = 2;
const PERSONAL_TOKENS: usize = 2;
const TRAIT_TOKENS: usize = 5;

/// Ordinal cut of a latent mean into 1..=5.
pub fn ordinal(mu: f64) -> u8 {
    match mu {
        m if m < 1.5 => 1,
        m if m < 2.5 => 2,
        m if m < 3.5 => 3,
        m if m < 4.5 => 4,
        _ => 5,
    }
}

/// Standard normal CDF.
fn phi(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

/// Zero-padded id: `prefix` followed by `i` padded to the width of `n - 1`.
fn pad_id(prefix: &str, i: usize, n: usize) -> String {
    let width = format!("{}", n.saturating_sub(1)).len().max(3);
    format!("{prefix}{i:0width$}")
}

/// Unique pronounceable pseudo-words.
struct WordFactory {
    rng: ChaCha8Rng,
    seen: BTreeSet<String>,
}

impl WordFactory {
    fn word(&mut self) -> String {
        const ONSET: [&str; 14] = ["k", "s", "t", "n", "h", "m", "r", "g", "z", "d", "b", "p", "ch", "sh"];
        const VOWEL: [&str; 5] = ["a", "i", "u", "e", "o"];
        loop {
            let syllables = self.rng.random_range(2..=4);
            let mut w = String::new();
            for _ in 0..syllables {
                w.push_str(ONSET[self.rng.random_range(0..ONSET.len())]);
                w.push_str(VOWEL[self.rng.random_range(0..VOWEL.len())]);
            }
            if self.seen.insert(w.clone()) {
                return w;
            }
        }
    }

    fn words(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.word()).collect()
    }
}

struct Vocabulary {
    topics: Vec<Vec<String>>,
    filler: Vec<String>,
    toxic: Vec<String>,
    /// Per latent dimension: words for positive and negative trait values.
    traits: Vec<(Vec<String>, Vec<String>)>,
}

fn gaussian(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    (0..m).map(|_| StandardNormal.sample(rng)).collect()
}

fn pick<'a>(rng: &mut ChaCha8Rng, pool: &'a [String]) -> &'a str {
    &pool[rng.random_range(0..pool.len())]
}

pub fn generate(config: &SynthConfig) -> Result<SynthCorpus> {
    config.validate()?;
    let m = config.latent_dim;
    let stream = |stage: &str| ChaCha8Rng::seed_from_u64(seed::derive(config.seed, stage));

    let mut words = WordFactory { rng: stream("synth/words"), seen: BTreeSet::new() };
    let vocab = Vocabulary {
        topics: (0..TOPICS).map(|_| words.words(TOPIC_WORDS)).collect(),
        filler: words.words(FILLER_WORDS),
        toxic: words.words(TOXIC_WORDS),
        traits: (0..m).map(|_| (words.words(TRAIT_WORDS), words.words(TRAIT_WORDS))).collect(),
    };

    // latent factors
    let mut latent = stream("synth/latent");
    let commenters: Vec<(String, Vec<f64>, f64, Vec<String>)> = (0..config.n_commenters)
        .map(|i| {
            let traits = gaussian(&mut latent, m);
            let toxicity: f64 = latent.random();
            (pad_id("u", i, config.n_commenters), traits, toxicity, words.words(PERSONAL_WORDS))
        })
        .collect();
    let readers: Vec<(String, Vec<f64>)> =
        (0..config.n_readers).map(|i| (pad_id("r", i, config.n_readers), gaussian(&mut latent, m))).collect();

    // news, evenly spaced over the timeline
    let mut text = stream("synth/text");
    let step = config.duration / config.n_news as i64;
    let news_topic: Vec<usize> = (0..config.n_news).map(|_| text.random_range(0..TOPICS)).collect();
    let news: Vec<NewsTweet> = (0..config.n_news)
        .map(|i| {
            let topic = &vocab.topics[news_topic[i]];
            let mut body: Vec<&str> = (0..6).map(|_| pick(&mut text, topic)).collect();
            let tag = format!("#{}", topic[0]);
            body.push(&tag);
            let url = format!("https://news.example/{i}");
            body.push(&url);
            NewsTweet {
                id: pad_id("n", i, config.n_news),
                text: body.join(" "),
                posted_at: config.start + step * i as i64,
            }
        })
        .collect();

    // comments
    let mut comments = Vec::with_capacity(config.n_commenters * config.comments_per_commenter);
    let mut density = Vec::with_capacity(comments.capacity());
    let mut author = Vec::with_capacity(comments.capacity());
    for (u, (uid, traits, toxicity, personal)) in commenters.iter().enumerate() {
        let weight_total: f64 = traits.iter().map(|t| t.abs()).sum();
        for _ in 0..config.comments_per_commenter {
            let n_idx = text.random_range(0..config.n_news);
            let posted_at = news[n_idx].posted_at + text.random_range(0..step.max(1));
            let topic = &vocab.topics[news_topic[n_idx]];
            let mut tokens: Vec<&str> = Vec::with_capacity(16);
            for _ in 0..TOPIC_TOKENS {
                tokens.push(pick(&mut text, topic));
            }
            for _ in 0..FILLER_TOKENS {
                tokens.push(pick(&mut text, &vocab.filler));
            }
            for _ in 0..PERSONAL_TOKENS {
                tokens.push(pick(&mut text, personal));
            }
            for _ in 0..TRAIT_TOKENS {
                // trait dimension chosen in proportion to |t_j|
                let mut x = text.random_range(0.0..weight_total.max(f64::MIN_POSITIVE));
                let mut j = 0;
                while j + 1 < m && x >= traits[j].abs() {
                    x -= traits[j].abs();
                    j += 1;
                }
                let (pos, neg) = &vocab.traits[j];
                tokens.push(pick(&mut text, if traits[j] >= 0.0 { pos } else { neg }));
            }
            let base_len = tokens.len();
            let mut toxic = 0usize;
            for _ in 0..base_len {
                if text.random_bool(TOXIC_RATE * toxicity) {
                    let at = text.random_range(0..=tokens.len());
                    tokens.insert(at, pick(&mut text, &vocab.toxic));
                    toxic += 1;
                }
            }
            // shuffle word order
            for i in (1..tokens.len()).rev() {
                tokens.swap(i, text.random_range(0..=i));
            }
            let mut body = tokens.join(" ");
            if text.random_bool(0.2) {
                body = format!("@{} {body}", uid);
            }
            if text.random_bool(0.1) {
                body.push_str(" https://t.example/x");
            }
            density.push(toxic as f64 / tokens.len() as f64);
            author.push(u);
            comments.push(Comment {
                id: String::new(),
                news_id: news[n_idx].id.clone(),
                commenter_id: uid.clone(),
                text: body,
                posted_at,
            });
        }
    }
    let n_comments = comments.len();
    for (i, c) in comments.iter_mut().enumerate() {
        c.id = pad_id("c", i, n_comments);
    }

    // rating means
    let mut rate = stream("synth/ratings");
    let scale = 1.0 / libm::sqrt(m as f64);
    struct Draw {
        reader: usize,
        comment: usize,
        affinity: f64,
        shift: f64,
        noise: f64,
    }
    let mut draws = Vec::new();
    for (r, (_, s)) in readers.iter().enumerate() {
        let k = config.ratings_per_reader.min(n_comments);
        let mut chosen = index::sample(&mut rate, n_comments, k).into_vec();
        chosen.sort_unstable();
        for c in chosen {
            let affinity = dot(s, &commenters[author[c]].1) * scale;
            let shift = config.affinity_weight * affinity + config.lexicon_weight * density[c];
            let z: f64 = StandardNormal.sample(&mut rate);
            draws.push(Draw { reader: r, comment: c, affinity, shift, noise: config.noise_sd * z });
        }
    }
    let base = match config.target_prevalence {
        Some(p) => calibrate_base(draws.iter().map(|d| d.shift + d.noise).collect(), p),
        None => config.base_level,
    };

    let window_end = config.start + (config.duration as f64 * config.feedback_window_fraction) as Timestamp;
    let mut ratings = Vec::with_capacity(draws.len());
    let mut feedback = Vec::new();
    let mut truth = GroundTruth { base, records: Vec::new() };
    for (id, traits, toxicity, _) in &commenters {
        truth.records.push(TruthRecord::Commenter { id: id.clone(), traits: traits.clone(), toxicity: *toxicity });
    }
    for (id, s) in &readers {
        truth.records.push(TruthRecord::Reader { id: id.clone(), sensitivity: s.clone() });
    }
    for d in &draws {
        let c = &comments[d.comment];
        let mean = base + d.shift;
        let rating = ordinal(mean + d.noise);
        let rated_at = c.posted_at + rate.random_range(0..3_600);
        let record =
            RatingRecord { reader_id: readers[d.reader].0.clone(), comment_id: c.id.clone(), rating, rated_at };
        if rating >= OFFENSIVE_MIN_RATING && c.posted_at < window_end {
            feedback.push(FeedbackRecord {
                reader_id: record.reader_id.clone(),
                comment_id: record.comment_id.clone(),
                rated_at,
            });
        }
        let offensive_probability = if config.noise_sd > 0.0 {
            1.0 - phi((3.5 - mean) / config.noise_sd)
        } else if mean >= 3.5 {
            1.0
        } else {
            0.0
        };
        truth.records.push(TruthRecord::Rating {
            reader_id: record.reader_id.clone(),
            comment_id: record.comment_id.clone(),
            mean,
            offensive_probability,
            affinity: d.affinity,
        });
        ratings.push(record);
    }

    Ok(SynthCorpus { news, comments, ratings, feedback, truth })
}

/// `base` such that a fraction `p` of `base + v` lands at or above 3.5.
fn calibrate_base(mut values: Vec<f64>, p: f64) -> f64 {
    if values.is_empty() {
        return 3.0;
    }
    values.sort_by(|a, b| b.total_cmp(a));
    let n = values.len();
    let k = libm::round(p * n as f64) as usize;
    if k == 0 {
        return 3.5 - values[0] - 1.0;
    }
    if k >= n {
        return 3.5 - values[n - 1];
    }
    // midway between the k-th largest and the next
    3.5 - 0.5 * (values[k - 1] + values[k])
}
