//! Evaluation report: average precision, a threshold table and a
//! Precision@k table per model kind, written as pretty JSON. PR points can be
//! exported separately as CSV for plotting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use commentshield_core::eval::{
    average_precision_of_curve, chance_level, default_thresholds, pr_curve, precision_at_k, threshold_table, Exclusion,
    LabelCounts, PRPoint, ScoredExample, ThresholdRow,
};
use commentshield_core::personalizer::ModelKind;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub seed: u64,
    /// Time boundaries separating train, validation and test comments.
    pub split: (i64, i64),
    pub cap: usize,
    pub eligibility_min: usize,
    pub per_reader: bool,
    pub exclusion: Exclusion,
    pub models: Vec<ModelReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub kind: ModelKind,
    pub test_examples: usize,
    pub positives: usize,
    pub readers: usize,
    /// `None` when the test split has no positive labels.
    pub average_precision: Option<f64>,
    pub chance_level: f64,
    pub thresholds: Vec<ThresholdRow>,
    pub precision_at_k: Vec<PrecisionAtKEntry>,
    #[serde(skip)]
    pub pr_points: Vec<PRPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionAtKEntry {
    pub k: usize,
    /// `None` when every reader was excluded.
    pub value: Option<f64>,
    pub readers_used: usize,
    pub readers_excluded: usize,
}

impl ModelReport {
    pub fn from_scores(
        kind: ModelKind,
        scored: &[ScoredExample],
        ks: &[usize],
        per_reader: bool,
        exclusion: Exclusion,
    ) -> Result<Self> {
        let counts = LabelCounts::of(scored.iter().map(|e| &e.label));
        let pr_points = if counts.positives > 0 { pr_curve(scored)? } else { Vec::new() };
        let average_precision = (counts.positives > 0).then(|| average_precision_of_curve(&pr_points));
        let mut readers: Vec<&str> = scored.iter().map(|e| e.reader_id.as_str()).collect();
        readers.sort_unstable();
        readers.dedup();

        let mut table = Vec::with_capacity(ks.len());
        for &k in ks {
            let entry = match precision_at_k(scored, k, per_reader, exclusion) {
                Ok(p) => PrecisionAtKEntry {
                    k,
                    value: Some(p.value),
                    readers_used: p.readers_used,
                    readers_excluded: p.readers_excluded,
                },
                Err(commentshield_core::Error::NoEligibleReaders(_)) => PrecisionAtKEntry {
                    k,
                    value: None,
                    readers_used: 0,
                    readers_excluded: if per_reader { readers.len() } else { 1 },
                },
                Err(e) => return Err(e.into()),
            };
            table.push(entry);
        }

        Ok(Self {
            kind,
            test_examples: scored.len(),
            positives: counts.positives,
            readers: readers.len(),
            average_precision,
            chance_level: chance_level(counts)?,
            thresholds: threshold_table(scored, &default_thresholds())?,
            precision_at_k: table,
            pr_points,
        })
    }
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &self.to_json())
    }

    /// `kind,threshold,precision,recall`, one row per PR point.
    pub fn pr_csv(&self) -> String {
        let mut out = String::from("kind,threshold,precision,recall\n");
        for m in &self.models {
            for p in &m.pr_points {
                let _ = writeln!(out, "{},{},{},{}", m.kind, p.threshold, p.precision, p.recall);
            }
        }
        out
    }

    /// Compact one-line view for the CLI summary.
    pub fn summary(&self) -> serde_json::Value {
        let models: Vec<_> = self
            .models
            .iter()
            .map(|m| {
                let pk: serde_json::Map<_, _> =
                    m.precision_at_k.iter().map(|p| (format!("p@{}", p.k), serde_json::json!(p.value))).collect();
                serde_json::json!({
                    "kind": m.kind,
                    "ap": m.average_precision,
                    "test_examples": m.test_examples,
                    "precision_at_k": pk,
                })
            })
            .collect();
        serde_json::json!({ "models": models })
    }
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use commentshield_core::corpus::Label;

    fn ex(reader: &str, comment: &str, score: f64, positive: bool) -> ScoredExample {
        ScoredExample { reader_id: reader.into(), comment_id: comment.into(), score, label: Label::from(positive) }
    }

    fn fixture() -> Vec<ScoredExample> {
        vec![
            ex("a", "c1", 0.9, true),
            ex("a", "c2", 0.8, false),
            ex("a", "c3", 0.7, true),
            ex("a", "c4", 0.6, true),
            ex("b", "c1", 0.2, false),
            ex("b", "c2", 0.4, true),
        ]
    }

    #[test]
    fn model_report_fields() {
        let m =
            ModelReport::from_scores(ModelKind::Simple, &fixture(), &[1, 3], true, Exclusion::MinPositives).unwrap();
        assert_eq!((m.test_examples, m.positives, m.readers), (6, 4, 2));
        assert_eq!(m.chance_level, 4.0 / 6.0);
        assert_eq!(m.thresholds.len(), 9);
        // k=1 uses both readers: a's top is positive, b's top (0.4) is positive
        assert_eq!(m.precision_at_k[0].value, Some(1.0));
        // k=3 excludes b (one positive); a's top 3 hold two positives
        assert_eq!(m.precision_at_k[1].value, Some(2.0 / 3.0));
        assert_eq!((m.precision_at_k[1].readers_used, m.precision_at_k[1].readers_excluded), (1, 1));
    }

    #[test]
    fn all_readers_excluded_is_none() {
        let m = ModelReport::from_scores(ModelKind::Simple, &fixture(), &[10], true, Exclusion::MinPositives).unwrap();
        assert_eq!(m.precision_at_k[0].value, None);
        assert_eq!(m.precision_at_k[0].readers_excluded, 2);
    }

    #[test]
    fn no_positives_has_no_ap() {
        let s = vec![ex("a", "c1", 0.3, false), ex("a", "c2", 0.1, false)];
        let m = ModelReport::from_scores(ModelKind::Simple, &s, &[1], true, Exclusion::MinPositives).unwrap();
        assert_eq!(m.average_precision, None);
        assert_eq!(m.chance_level, 0.0);
    }

    #[test]
    fn json_round_trip_and_csv() {
        let m =
            ModelReport::from_scores(ModelKind::Proposed, &fixture(), &[1, 3, 5, 10], true, Exclusion::MinPositives)
                .unwrap();
        let report = EvalReport {
            seed: 1,
            split: (10, 20),
            cap: 5,
            eligibility_min: 5,
            per_reader: true,
            exclusion: Exclusion::MinPositives,
            models: vec![m],
        };
        let back: EvalReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back.models[0].average_precision, report.models[0].average_precision);
        assert_eq!(back.models[0].precision_at_k.len(), 4);
        let csv = report.pr_csv();
        assert!(csv.starts_with("kind,threshold,precision,recall\nproposed,0.9,1,0.25\n"));
        assert_eq!(csv.lines().count(), 1 + report.models[0].pr_points.len());
    }
}
