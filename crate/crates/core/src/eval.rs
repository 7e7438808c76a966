//! Ranking and classification metrics: PR curves, average precision,
//! threshold tables, per-reader Precision@k, chance level and rating spread.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredExample {
    pub reader_id: String,
    pub comment_id: String,
    pub score: f64,
    pub label: Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PRPoint {
    pub threshold: f64,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub threshold: f64,
    pub accuracy: f64,
    pub recall: f64,
    pub precision: f64,
    pub f_measure: f64,
}

fn check_scores(examples: &[ScoredExample]) -> Result<()> {
    match examples.iter().find(|e| !(0.0..=1.0).contains(&e.score)) {
        Some(e) => Err(Error::InvalidScore(e.score)),
        None => Ok(()),
    }
}

fn positives(examples: &[ScoredExample]) -> usize {
    examples.iter().filter(|e| e.label.is_offensive()).count()
}

/// One point per distinct score, highest first; equal scores enter together.
pub fn pr_curve(examples: &[ScoredExample]) -> Result<Vec<PRPoint>> {
    check_scores(examples)?;
    let total_pos = positives(examples);
    if total_pos == 0 {
        return Err(Error::NoPositives);
    }
    let mut sorted: Vec<(f64, bool)> = examples.iter().map(|e| (e.score, e.label.is_offensive())).collect();
    sorted.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut points = Vec::new();
    let (mut tp, mut predicted) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let threshold = sorted[i].0;
        while i < sorted.len() && sorted[i].0 == threshold {
            predicted += 1;
            tp += usize::from(sorted[i].1);
            i += 1;
        }
        points.push(PRPoint {
            threshold,
            precision: tp as f64 / predicted as f64,
            recall: tp as f64 / total_pos as f64,
        });
    }
    Ok(points)
}

/// Step-interpolated area under the PR curve: `Σ (R_n − R_{n−1}) · P_n`.
pub fn average_precision(examples: &[ScoredExample]) -> Result<f64> {
    Ok(average_precision_of_curve(&pr_curve(examples)?))
}

pub fn average_precision_of_curve(points: &[PRPoint]) -> f64 {
    let mut prev_recall = 0.0;
    let mut ap = 0.0;
    for p in points {
        ap += (p.recall - prev_recall) * p.precision;
        prev_recall = p.recall;
    }
    ap
}

/// 0.1, 0.2, …, 0.9.
pub fn default_thresholds() -> Vec<f64> {
    (1..=9).map(|i| f64::from(i) / 10.0).collect()
}

/// Scores `>= threshold` count as offensive. Undefined ratios are 0.
pub fn threshold_table(examples: &[ScoredExample], thresholds: &[f64]) -> Result<Vec<ThresholdRow>> {
    if examples.is_empty() {
        return Err(Error::Empty("examples"));
    }
    check_scores(examples)?;
    let n = examples.len() as f64;
    let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    Ok(thresholds
        .iter()
        .map(|&threshold| {
            let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
            for e in examples {
                match (e.score >= threshold, e.label.is_offensive()) {
                    (true, true) => tp += 1,
                    (true, false) => fp += 1,
                    (false, true) => fneg += 1,
                    (false, false) => {}
                }
            }
            let tn = examples.len() - tp - fp - fneg;
            let precision = ratio(tp, tp + fp);
            let recall = ratio(tp, tp + fneg);
            let f_measure =
                if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
            ThresholdRow { threshold, accuracy: (tp + tn) as f64 / n, recall, precision, f_measure }
        })
        .collect())
}

/// Which readers Precision@k skips.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exclusion {
    /// Readers with fewer than `k` positive test labels.
    #[default]
    MinPositives,
    /// Readers with fewer than `k` test examples.
    MinExamples,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionAtK {
    pub k: usize,
    pub value: f64,
    pub readers_used: usize,
    pub readers_excluded: usize,
}

/// Mean over readers of the positive fraction among each reader's top `k`
/// (score descending, `comment_id` ascending on ties). With
/// `per_reader = false` all examples form one ranking.
pub fn precision_at_k(
    examples: &[ScoredExample],
    k: usize,
    per_reader: bool,
    exclusion: Exclusion,
) -> Result<PrecisionAtK> {
    if k == 0 {
        return Err(Error::InvalidConfig(String::from("k must be >= 1")));
    }
    check_scores(examples)?;
    let mut groups: BTreeMap<&str, Vec<&ScoredExample>> = BTreeMap::new();
    for e in examples {
        let key = if per_reader { e.reader_id.as_str() } else { "" };
        groups.entry(key).or_default().push(e);
    }
    let (mut sum, mut used, mut excluded) = (0.0, 0usize, 0usize);
    for group in groups.values_mut() {
        let size = match exclusion {
            Exclusion::MinPositives => group.iter().filter(|e| e.label.is_offensive()).count(),
            Exclusion::MinExamples => group.len(),
        };
        if size < k {
            excluded += 1;
            continue;
        }
        group.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.comment_id.cmp(&b.comment_id)));
        let hits = group.iter().take(k).filter(|e| e.label.is_offensive()).count();
        sum += hits as f64 / k as f64;
        used += 1;
    }
    if used == 0 {
        return Err(Error::NoEligibleReaders(k));
    }
    Ok(PrecisionAtK { k, value: sum / used as f64, readers_used: used, readers_excluded: excluded })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub positives: usize,
    pub negatives: usize,
}

impl LabelCounts {
    pub fn total(&self) -> usize {
        self.positives + self.negatives
    }

    pub fn of<'a>(labels: impl IntoIterator<Item = &'a Label>) -> Self {
        labels.into_iter().fold(Self::default(), |mut c, l| {
            if l.is_offensive() {
                c.positives += 1;
            } else {
                c.negatives += 1;
            }
            c
        })
    }
}

/// Expected Precision@k of an uninformed scorer: the positive prevalence.
pub fn chance_level(counts: LabelCounts) -> Result<f64> {
    if counts.total() == 0 {
        return Err(Error::Empty("label counts"));
    }
    Ok(counts.positives as f64 / counts.total() as f64)
}

/// Population standard deviation of 1–5 ratings.
pub fn rating_stddev(ratings: &[u8]) -> Result<f64> {
    if ratings.len() < 2 {
        return Err(Error::TooFewValues { required: 2, actual: ratings.len() });
    }
    let (mut n, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for &r in ratings {
        if !(1..=5).contains(&r) {
            return Err(Error::RatingOutOfRange(i64::from(r)));
        }
        // Welford
        n += 1.0;
        let x = f64::from(r);
        let d = x - mean;
        mean += d / n;
        m2 += d * (x - mean);
    }
    Ok(libm::sqrt(m2 / n))
}
