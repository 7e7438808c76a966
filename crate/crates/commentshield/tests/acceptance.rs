//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use commentshield::config::RunConfig;
use commentshield::pipeline;
use commentshield::report::EvalReport;
use commentshield_core::commenter::{
    train_commenter_model, CommenterDataset, CommenterDatasets, CommenterModel, CommenterModelConfig,
};
use commentshield_core::corpus::{Comment, CorpusStore, FeedbackRecord, Label, NewsTweet, RatingRecord};
use commentshield_core::encoder::{EmbeddingVector, EncoderConfig, HashingEncoder};
use commentshield_core::eval::{
    average_precision, chance_level, pr_curve, precision_at_k, threshold_table, Exclusion, LabelCounts, PRPoint,
    ScoredExample, ThresholdRow,
};
use commentshield_core::personalizer::{Featurizer, HeadConfig, ModelKind, OffensiveHead, TrainingSet};
use commentshield_core::textprep::{clean_comment, clean_news};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("personalization ordering (AP, 3 seeds)", personalization_ordering),
        ("commenter-signal advantage (P@1, P@3, 3 seeds)", commenter_signal_advantage),
        ("chance level", chance_level_check),
        ("metric oracle equivalence (100 fixtures)", metric_oracles),
        ("pooling and layout invariants", pooling_and_layout),
        ("gradient checks (commenter model, head)", gradient_checks),
        ("commenter encoder learnability", commenter_learnability),
        ("preprocessing bit-exactness and idempotence", preprocessing),
        ("CLI reproducibility", cli_reproducibility),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn verdict(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ap_of(report: &EvalReport, kind: ModelKind) -> f64 {
    report.models.iter().find(|m| m.kind == kind).unwrap().average_precision.unwrap()
}

fn p_at(report: &EvalReport, kind: ModelKind, k: usize) -> f64 {
    let m = report.models.iter().find(|m| m.kind == kind).unwrap();
    m.precision_at_k.iter().find(|p| p.k == k).unwrap().value.unwrap()
}

fn personalization_ordering() -> Verdict {
    let start = Instant::now();
    let mut mean: BTreeMap<ModelKind, f64> = BTreeMap::new();
    for seed in 0..3 {
        let config = RunConfig { seed, ..Default::default() };
        let s = &config.synth;
        assert!(s.n_readers >= 50 && s.n_commenters >= 30);
        assert!(s.affinity_weight > 0.0 && s.lexicon_weight > 0.0);
        let store = common::synth_store(&config);
        let encoder = pipeline::build_encoder(&config).unwrap();
        let report = pipeline::run_in_memory(&config, &store, &encoder).unwrap();
        for kind in ModelKind::ALL {
            *mean.entry(kind).or_default() += ap_of(&report, kind) / 3.0;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let (simple, proposed, nopers) =
        (mean[&ModelKind::Simple], mean[&ModelKind::Proposed], mean[&ModelKind::NoPersonalization]);
    verdict(
        simple >= nopers + 0.05 && proposed >= nopers + 0.05 && secs < 300.0,
        format!("mean AP simple {simple:.3}, proposed {proposed:.3}, no_personalization {nopers:.3} (need +0.05); {secs:.0}s < 300s"),
    )
}

fn commenter_signal_advantage() -> Verdict {
    let (mut p1, mut p3) = ([0.0; 2], [0.0; 2]);
    for seed in 0..3 {
        let mut config = RunConfig { seed, ..Default::default() };
        config.synth.affinity_weight = 3.0;
        config.synth.lexicon_weight = 0.0;
        config.models = vec![ModelKind::Simple, ModelKind::Proposed];
        let store = common::synth_store(&config);
        let encoder = pipeline::build_encoder(&config).unwrap();
        let report = pipeline::run_in_memory(&config, &store, &encoder).unwrap();
        for (i, kind) in [ModelKind::Simple, ModelKind::Proposed].into_iter().enumerate() {
            p1[i] += p_at(&report, kind, 1) / 3.0;
            p3[i] += p_at(&report, kind, 3) / 3.0;
        }
    }
    verdict(
        p1[1] >= p1[0] + 0.05 && p3[1] >= p3[0] + 0.05,
        format!(
            "P@1 proposed {:.3} vs simple {:.3}; P@3 proposed {:.3} vs simple {:.3} (alpha 3, beta 0)",
            p1[1], p1[0], p3[1], p3[0]
        ),
    )
}

fn chance_level_check() -> Verdict {
    let exact = chance_level(LabelCounts { positives: 29_200, negatives: 70_800 }).unwrap();
    // 1000 readers x 50 test examples, 15 positives each
    let mut rng = ChaCha8Rng::seed_from_u64(292);
    let mut examples = Vec::new();
    for r in 0..1000 {
        for c in 0..50 {
            examples.push(ScoredExample {
                reader_id: format!("r{r}"),
                comment_id: format!("c{c:02}"),
                score: rng.random::<f64>(),
                label: Label::from(c < 15),
            });
        }
    }
    let prevalence = chance_level(LabelCounts::of(examples.iter().map(|e| &e.label))).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for k in [1, 3, 5, 10] {
        let p = precision_at_k(&examples, k, true, Exclusion::MinPositives).unwrap().value;
        worst = worst.max((p - prevalence).abs());
        parts.push(format!("P@{k}={p:.3}"));
    }
    verdict(
        exact == 0.292 && worst <= 0.05,
        format!(
            "chance_level(29200/100000) = {exact}; random scorer on {} examples, prevalence {prevalence}: {} (max gap {worst:.3})",
            examples.len(),
            parts.join(" ")
        ),
    )
}

// brute-force oracles

fn oracle_pr(ex: &[ScoredExample]) -> Vec<PRPoint> {
    let total_pos = ex.iter().filter(|e| e.label.is_offensive()).count();
    let mut thresholds: Vec<f64> = ex.iter().map(|e| e.score).collect();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    thresholds
        .into_iter()
        .map(|t| {
            let tp = ex.iter().filter(|e| e.score >= t && e.label.is_offensive()).count();
            let predicted = ex.iter().filter(|e| e.score >= t).count();
            PRPoint { threshold: t, precision: tp as f64 / predicted as f64, recall: tp as f64 / total_pos as f64 }
        })
        .collect()
}

fn oracle_ap(points: &[PRPoint]) -> f64 {
    let mut recalls = vec![0.0];
    recalls.extend(points.iter().map(|p| p.recall));
    points.iter().enumerate().map(|(i, p)| (recalls[i + 1] - recalls[i]) * p.precision).fold(0.0, |a, b| a + b)
}

fn oracle_rows(ex: &[ScoredExample], thresholds: &[f64]) -> Vec<ThresholdRow> {
    thresholds
        .iter()
        .map(|&t| {
            let count = |pred: bool, pos: bool| {
                ex.iter().filter(|e| (e.score >= t) == pred && e.label.is_offensive() == pos).count()
            };
            let (tp, fp, fneg, tn) = (count(true, true), count(true, false), count(false, true), count(false, false));
            let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
            let recall = if tp + fneg == 0 { 0.0 } else { tp as f64 / (tp + fneg) as f64 };
            let f = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
            ThresholdRow { threshold: t, accuracy: (tp + tn) as f64 / ex.len() as f64, recall, precision, f_measure: f }
        })
        .collect()
}

fn oracle_p_at_k(ex: &[ScoredExample], k: usize) -> Option<f64> {
    let mut readers: Vec<&str> = ex.iter().map(|e| e.reader_id.as_str()).collect();
    readers.sort_unstable();
    readers.dedup();
    let mut values = Vec::new();
    for r in readers {
        let mut mine: Vec<&ScoredExample> = ex.iter().filter(|e| e.reader_id == r).collect();
        if mine.iter().filter(|e| e.label.is_offensive()).count() < k {
            continue;
        }
        // selection of the top k, highest score then lowest comment id
        let mut hits = 0;
        for _ in 0..k {
            let best = (0..mine.len())
                .reduce(|a, b| {
                    let (x, y) = (mine[a], mine[b]);
                    if y.score > x.score || (y.score == x.score && y.comment_id < x.comment_id) {
                        b
                    } else {
                        a
                    }
                })
                .unwrap();
            hits += usize::from(mine.remove(best).label.is_offensive());
        }
        values.push(hits as f64 / k as f64);
    }
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

fn metric_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let thresholds = commentshield_core::eval::default_thresholds();
    let mut checked = 0;
    for fixture in 0..100 {
        let n = rng.random_range(1..=200);
        let readers = rng.random_range(1..=8);
        // a coarse grid forces score ties
        let grid = rng.random_range(2..=40);
        let mut ex: Vec<ScoredExample> = (0..n)
            .map(|i| ScoredExample {
                reader_id: format!("r{}", rng.random_range(0..readers)),
                comment_id: format!("c{:03}", rng.random_range(0..1000) * 1000 + i),
                score: f64::from(rng.random_range(0..=grid)) / f64::from(grid),
                label: Label::from(rng.random_bool(0.35)),
            })
            .collect();
        if !ex.iter().any(|e| e.label.is_offensive()) {
            ex[0].label = Label::Offensive;
        }
        let curve = pr_curve(&ex).unwrap();
        if curve != oracle_pr(&ex) {
            return Err(format!("pr_curve differs on fixture {fixture}"));
        }
        let ap = average_precision(&ex).unwrap();
        if ap.to_bits() != oracle_ap(&curve).to_bits() {
            return Err(format!("average_precision differs on fixture {fixture}"));
        }
        if threshold_table(&ex, &thresholds).unwrap() != oracle_rows(&ex, &thresholds) {
            return Err(format!("threshold_table differs on fixture {fixture}"));
        }
        for k in [1, 2, 3, 5, 10] {
            let got = precision_at_k(&ex, k, true, Exclusion::MinPositives).ok().map(|p| p.value);
            if got.map(f64::to_bits) != oracle_p_at_k(&ex, k).map(f64::to_bits) {
                return Err(format!("precision_at_k(k={k}) differs on fixture {fixture}"));
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} fixtures, all four metrics bit-equal to brute force"))
}

fn pooling_store(reverse: bool) -> CorpusStore {
    let news = vec![
        NewsTweet { id: "n1".into(), text: "rates rise again #economy".into(), posted_at: 0 },
        NewsTweet { id: "n2".into(), text: "storm warning https://t.co/z".into(), posted_at: 5 },
    ];
    let texts = ["what a joke", "stay safe everyone", "idiots in charge", "fine by me", "never again", "lol"];
    let mut comments: Vec<Comment> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| Comment {
            id: format!("c{i}"),
            news_id: if i % 2 == 0 { "n1".into() } else { "n2".into() },
            commenter_id: if i < 4 { "u1".into() } else { "u2".into() },
            text: (*t).into(),
            posted_at: 10 + i as i64,
        })
        .collect();
    let fb = |r: &str, c: &str, t: i64| FeedbackRecord { reader_id: r.into(), comment_id: c.into(), rated_at: t };
    let mut feedback =
        vec![fb("ra", "c0", 100), fb("ra", "c2", 101), fb("ra", "c4", 101), fb("ra", "c5", 103), fb("rb", "c3", 50)];
    let ratings = vec![RatingRecord { reader_id: "rc".into(), comment_id: "c1".into(), rating: 2, rated_at: 60 }];
    if reverse {
        comments.reverse();
        feedback.reverse();
    }
    CorpusStore::build(news, comments, ratings, feedback).unwrap()
}

fn pooling_and_layout() -> Verdict {
    let encoder = HashingEncoder::new(EncoderConfig { dim: 16, ..Default::default() }).unwrap();
    let config = CommenterModelConfig { proj_dim: 4, seed: 8, ..Default::default() };
    let cm = CommenterModel::init(config, vec!["u1".into(), "u2".into()], 16, 0).unwrap();
    let cm = CommenterModel {
        base_encoder_fingerprint: commentshield_core::encoder::PairEncoder::fingerprint(&encoder),
        ..cm
    };
    let (a, b) = (pooling_store(false), pooling_store(true));
    let mut fa = Featurizer::new(&a, &encoder, Some(&cm), 5).unwrap();
    let mut fb = Featurizer::new(&b, &encoder, Some(&cm), 5).unwrap();

    // permutation invariance
    for kind in [ModelKind::Simple, ModelKind::Proposed] {
        if fa.reader_vector(kind, "ra").unwrap() != fb.reader_vector(kind, "ra").unwrap() {
            return Err(format!("{kind} reader vector depends on input order"));
        }
    }
    for u in ["u1", "u2"] {
        if cm.enc(&a, &encoder, u).unwrap() != cm.enc(&b, &encoder, u).unwrap() {
            return Err(format!("enc({u}) depends on input order"));
        }
    }

    // single-item identity
    let pair = fa.pair_vector("c3").unwrap();
    if fa.reader_vector(ModelKind::Simple, "rb").unwrap().values != pair {
        return Err("simple reader vector of one feedback is not its pair vector".into());
    }
    let enc_u1 = fa.commenter_vector("u1").unwrap();
    if fa.reader_vector(ModelKind::Proposed, "rb").unwrap().values != pair.concat(&enc_u1) {
        return Err("proposed reader vector of one feedback is not [pair | enc]".into());
    }
    let single =
        CommenterModel { config: CommenterModelConfig { docs_per_commenter: 1, ..cm.config.clone() }, ..cm.clone() };
    if single.enc(&a, &encoder, "u2").unwrap() != single.project(&fa.pair_vector("c5").unwrap()).unwrap() {
        return Err("enc over one comment is not its projection".into());
    }

    // concatenation round trip
    let x = fa.input_vector(ModelKind::Proposed, "ra", "c1").unwrap();
    let t = fa.target_vector(ModelKind::Proposed, "c1").unwrap();
    let r = fa.reader_vector(ModelKind::Proposed, "ra").unwrap();
    let half = t.values.dim();
    let ok = x.dim() == ModelKind::Proposed.input_dim(16, 4)
        && x[..half] == *t.values
        && x[half..] == *r.values
        && t.pair_part() == fa.pair_vector("c1").unwrap().as_slice()
        && t.commenter_part() == fa.commenter_vector("u1").unwrap().as_slice()
        && r.pair_part().len() == 16
        && r.commenter_part().len() == 4;
    verdict(ok, "order-permuted stores give bit-equal reader and commenter vectors; one-item pools are identities; slices of x recover both halves".into())
}

fn gradient_checks() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    let mut rel = |analytic: f64, numeric: f64| {
        let e = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-8);
        worst = worst.max(e);
    };
    let eps = 1e-6;

    // commenter model, 3 examples
    let mut cm = CommenterModel::init(
        CommenterModelConfig { proj_dim: 4, ..Default::default() },
        vec!["a".into(), "b".into(), "c".into()],
        6,
        0,
    )
    .unwrap();
    let xs: Vec<Vec<f64>> = (0..3).map(|_| (0..6).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let examples: Vec<(&[f64], usize)> = xs.iter().enumerate().map(|(i, x)| (x.as_slice(), i)).collect();
    let p0: Vec<f64> = cm.parameters().iter().map(|v| v + rng.random_range(-0.3..0.3)).collect();
    cm.set_parameters(&p0).unwrap();
    let analytic = cm.loss_and_gradients(&examples).unwrap().1.flatten();
    for i in 0..p0.len() {
        let mut q = p0.clone();
        q[i] += eps;
        cm.set_parameters(&q).unwrap();
        let up = cm.loss_and_gradients(&examples).unwrap().0;
        q[i] -= 2.0 * eps;
        cm.set_parameters(&q).unwrap();
        let down = cm.loss_and_gradients(&examples).unwrap().0;
        rel(analytic[i], (up - down) / (2.0 * eps));
    }
    let commenter_params = p0.len();

    // offensive head (proposed layout, interaction on), 3 examples
    let mut set = TrainingSet::new(ModelKind::Proposed, 0, Some(0));
    for (i, label) in [true, false, true].into_iter().enumerate() {
        let v =
            |rng: &mut ChaCha8Rng| EmbeddingVector::new((0..5).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let (t, r) = (v(&mut rng), v(&mut rng));
        set.push(t, Some(r), Label::from(label), "r", &format!("c{i}")).unwrap();
    }
    let config = HeadConfig { positive_weight: 1.7, ..Default::default() };
    let mut head = OffensiveHead::init(ModelKind::Proposed, set.dim(), config, 0, Some(0)).unwrap();
    let p0: Vec<f64> = (0..head.parameter_count()).map(|_| rng.random_range(-0.8..0.8)).collect();
    head.set_parameters(&p0).unwrap();
    let idx = [0, 1, 2];
    let analytic = head.loss_and_gradient(&set, &idx).unwrap().1;
    for i in 0..p0.len() {
        let mut q = p0.clone();
        q[i] += eps;
        head.set_parameters(&q).unwrap();
        let up = head.loss_and_gradient(&set, &idx).unwrap().0;
        q[i] -= 2.0 * eps;
        head.set_parameters(&q).unwrap();
        let down = head.loss_and_gradient(&set, &idx).unwrap().0;
        rel(analytic[i], (up - down) / (2.0 * eps));
    }
    verdict(
        worst <= 1e-4,
        format!(
            "{commenter_params} commenter and {} head parameters, max relative error {worst:.2e} <= 1e-4",
            p0.len()
        ),
    )
}

fn commenter_learnability() -> Verdict {
    // 8 commenters, each a well-separated cluster around its own axis
    let (classes, dim) = (8, 32);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sample = |label: usize, n: usize| -> Vec<(EmbeddingVector, usize)> {
        (0..n)
            .map(|_| {
                let mut x: Vec<f64> = (0..dim).map(|_| rng.random_range(-0.2..0.2)).collect();
                x[label] += 1.0;
                (EmbeddingVector::new(x).unwrap(), label)
            })
            .collect()
    };
    let mut data = CommenterDatasets { roster: (0..classes).map(|i| format!("u{i}")).collect(), ..Default::default() };
    for label in 0..classes {
        data.train.examples.extend(sample(label, 40));
        data.validation.examples.extend(sample(label, 5));
        data.test.examples.extend(sample(label, 5));
    }
    let config = CommenterModelConfig { epochs: 100, seed: 1, ..Default::default() };
    let (model, report) = train_commenter_model(&data, &config, 0).unwrap();
    let acc = model.accuracy(&data.validation).unwrap();
    let first = report.validation_accuracy.iter().position(|&a| a >= 0.95).map(|e| e + 1);
    let test: &CommenterDataset = &data.test;
    verdict(
        acc >= 0.95,
        format!(
            "validation accuracy {acc:.3} (first >= 0.95 at epoch {}), test accuracy {:.3}",
            first.map_or("never".into(), |e| e.to_string()),
            model.accuracy(test).unwrap()
        ),
    )
}

fn fuzz_string(rng: &mut ChaCha8Rng) -> String {
    const PIECES: &[&str] = &[
        "a",
        "Z",
        "9",
        "_",
        " ",
        "  ",
        "\t",
        "\n",
        "@",
        "#",
        "http://",
        "https://",
        "t.co/x",
        "www.",
        "¥",
        "→",
        "$",
        "+",
        "😀",
        "👍",
        "🇯🇵",
        "‼",
        "©",
        "ニュース",
        "漢",
        "é",
        "\u{200d}",
        "\u{fe0f}",
        ".",
        "/",
        ":",
        "-",
        "@nhk_news",
        "#tag",
    ];
    let n = rng.random_range(0..24);
    (0..n).map(|_| PIECES[rng.random_range(0..PIECES.len())]).collect()
}

fn preprocessing() -> Verdict {
    let news = [
        ("Breaking news https://t.co/x #nhk_news", "Breaking news"),
        ("", ""),
        ("A ¥100 plan → soon", "A 100 plan soon"),
    ];
    let comments = [
        ("@nhk_news this is bad", "this is bad"),
        ("no changes here", "no changes here"),
        ("so cool 😀👍 http://a.b", "so cool"),
    ];
    for (raw, want) in news {
        let got = clean_news(raw);
        if got.as_str().as_bytes() != want.as_bytes() {
            return Err(format!("clean_news({raw:?}) = {:?}, want {want:?}", got.as_str()));
        }
    }
    for (raw, want) in comments {
        let got = clean_comment(raw);
        if got.as_str().as_bytes() != want.as_bytes() {
            return Err(format!("clean_comment({raw:?}) = {:?}, want {want:?}", got.as_str()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let s = fuzz_string(&mut rng);
        let n = clean_news(&s);
        let c = clean_comment(&s);
        if clean_news(n.as_str()) != n || clean_comment(c.as_str()) != c {
            return Err(format!("not idempotent on {s:?}"));
        }
    }
    Ok("6 documented examples byte-exact; idempotent on 1000 fuzzed strings".into())
}

fn run_cli(config: &Path, args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_commentshield"))
        .arg("--config")
        .arg(config)
        .args(args)
        .env_remove("COMMENTSHIELD_CONFIG")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(())
}

fn full_pipeline(dir: &Path) -> Result<Vec<u8>, String> {
    let mut config = RunConfig { seed: 2024, ..Default::default() };
    config.data_dir = dir.join("data");
    config.artifacts_dir = dir.join("artifacts");
    let path = dir.join("run.toml");
    std::fs::write(&path, toml::to_string(&config).unwrap()).map_err(|e| e.to_string())?;
    for args in [
        &["synth"][..],
        &["train-commenter"],
        &["train"],
        &["evaluate", "--models", "simple,proposed,nopers", "--k", "1,3,5,10"],
    ] {
        run_cli(&path, args)?;
    }
    std::fs::read(dir.join("artifacts/report.json")).map_err(|e| e.to_string())
}

fn cli_reproducibility() -> Verdict {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = full_pipeline(a.path())?;
    let second = full_pipeline(b.path())?;
    let report: EvalReport = serde_json::from_slice(&first).map_err(|e| e.to_string())?;
    verdict(
        first == second && report.models.len() == 3,
        format!(
            "two synth/train-commenter/train/evaluate runs with seed 2024: reports of {} bytes, identical = {}",
            first.len(),
            first == second
        ),
    )
}
