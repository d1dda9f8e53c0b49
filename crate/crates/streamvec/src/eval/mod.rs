//! Periodic evaluation harness and intrinsic-metric evaluators.
//!
//! Every `p` processed instances the live model is snapshotted and scored
//! against the configured gold datasets; one record per dataset is appended
//! to a JSON result log. Out-of-vocabulary words receive the mean resident
//! embedding.

pub mod datasets;
pub mod kmeans;
pub mod metrics;

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::corpus::DocumentStream;
use crate::error::{Error, Result};
use crate::model::{EmbeddingSnapshot, IncrementalModel};
use datasets::{AnalogyDataset, CategorizationDataset, SimilarityDataset};

/// Outcome class of one evaluation record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalStatus {
    /// Metric computed normally.
    Ok,
    /// Metric mathematically undefined (tie degeneracy, all-OOV dataset);
    /// recorded with a null score so time series stay aligned.
    Undefined,
    /// Evaluator failed; training continued.
    Error,
}

/// One periodic-evaluation outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    /// Instances processed when the evaluation fired.
    pub c: u64,
    pub dataset: String,
    pub metric: String,
    pub score: Option<f64>,
    pub status: EvalStatus,
    pub oov_fraction: f64,
    pub wall_ms: u64,
}

/// Resolves each word to a vector: resident words get their embedding, OOV
/// words the mean over all resident embeddings. Returns the vectors plus the
/// exact OOV fraction.
pub fn resolve_vectors(
    words: &[&str],
    snapshot: &EmbeddingSnapshot,
) -> Result<(Vec<Vec<f64>>, f64)> {
    let mean = snapshot.mean_vector().ok_or(Error::EmptyVocabulary)?;
    let mut oov = 0usize;
    let vectors = words
        .iter()
        .map(|w| match snapshot.get(w) {
            Some(v) => v.to_vec(),
            None => {
                oov += 1;
                mean.clone()
            }
        })
        .collect();
    let fraction = if words.is_empty() {
        0.0
    } else {
        oov as f64 / words.len() as f64
    };
    Ok((vectors, fraction))
}

fn record(
    dataset: &str,
    metric: &str,
    score: Option<f64>,
    status: EvalStatus,
    oov_fraction: f64,
) -> EvalRecord {
    if let Some(s) = score {
        debug_assert!((-1.0..=1.0).contains(&s) || metric != "spearman");
        debug_assert!((0.0..=1.0).contains(&s) || metric == "spearman");
    }
    EvalRecord {
        c: 0,
        dataset: dataset.to_owned(),
        metric: metric.to_owned(),
        score,
        status,
        oov_fraction,
        wall_ms: 0,
    }
}

/// Similarity task: Spearman correlation between cosine similarities of the
/// resolved vectors and the human scores.
pub fn evaluate_similarity(
    snapshot: &EmbeddingSnapshot,
    ds: &SimilarityDataset,
) -> Result<EvalRecord> {
    assert!(!ds.pairs.is_empty(), "similarity dataset is empty");
    let words: Vec<&str> = ds
        .pairs
        .iter()
        .flat_map(|p| [p.word1.as_str(), p.word2.as_str()])
        .collect();
    let (vectors, oov_fraction) = resolve_vectors(&words, snapshot)?;
    let model_scores: Vec<f64> = vectors
        .chunks_exact(2)
        .map(|pair| metrics::cosine(&pair[0], &pair[1]))
        .collect();
    let human_scores: Vec<f64> = ds.pairs.iter().map(|p| p.score).collect();
    Ok(match metrics::spearman(&model_scores, &human_scores) {
        Some(rho) => record(&ds.name, "spearman", Some(rho), EvalStatus::Ok, oov_fraction),
        None => record(&ds.name, "spearman", None, EvalStatus::Undefined, oov_fraction),
    })
}

/// Categorization task: k-means (k = gold category count, k-means++, 10
/// seeded restarts, best inertia) on the resolved vectors, scored by purity.
pub fn evaluate_categorization(
    snapshot: &EmbeddingSnapshot,
    ds: &CategorizationDataset,
    seed: u64,
) -> Result<EvalRecord> {
    assert!(!ds.rows.is_empty(), "categorization dataset is empty");
    let words: Vec<&str> = ds.rows.iter().map(|(w, _)| w.as_str()).collect();
    let (vectors, oov_fraction) = resolve_vectors(&words, snapshot)?;

    let mut category_ids = std::collections::HashMap::new();
    let labels: Vec<usize> = ds
        .rows
        .iter()
        .map(|(_, c)| {
            let next = category_ids.len();
            *category_ids.entry(c.clone()).or_insert(next)
        })
        .collect();
    let k = category_ids.len();

    let clustering = kmeans::kmeans(&vectors, k, 10, seed);
    let purity = kmeans::purity(&clustering.assignments, &labels, k, k);
    Ok(record(&ds.name, "purity", Some(purity), EvalStatus::Ok, oov_fraction))
}

/// Analogy task (3CosAdd): predict the word maximizing
/// `cosine(v, v_b - v_a + v_c)` over the resident vocabulary, excluding the
/// query words; accuracy over rows whose a, b, c are all resident.
pub fn evaluate_analogy(snapshot: &EmbeddingSnapshot, ds: &AnalogyDataset) -> Result<EvalRecord> {
    assert!(!ds.rows.is_empty(), "analogy dataset is empty");
    if snapshot.is_empty() {
        return Err(Error::EmptyVocabulary);
    }
    let mut correct = 0usize;
    let mut skipped = 0usize;
    for [a, b, c, d] in &ds.rows {
        let (Some(va), Some(vb), Some(vc)) = (snapshot.get(a), snapshot.get(b), snapshot.get(c))
        else {
            skipped += 1;
            continue;
        };
        let query: Vec<f64> = vb
            .iter()
            .zip(va)
            .zip(vc)
            .map(|((b, a), c)| b - a + c)
            .collect();
        let mut best: Option<(&str, f64)> = None;
        for (word, vector) in snapshot.iter() {
            if word == a || word == b || word == c {
                continue;
            }
            let sim = metrics::cosine(&query, vector);
            if best.is_none_or(|(_, s)| sim > s) {
                best = Some((word, sim));
            }
        }
        if best.map(|(w, _)| w) == Some(d.as_str()) {
            correct += 1;
        }
    }
    let evaluated = ds.rows.len() - skipped;
    let oov_fraction = skipped as f64 / ds.rows.len() as f64;
    Ok(if evaluated == 0 {
        record(&ds.name, "analogy_accuracy", None, EvalStatus::Undefined, oov_fraction)
    } else {
        let accuracy = correct as f64 / evaluated as f64;
        record(&ds.name, "analogy_accuracy", Some(accuracy), EvalStatus::Ok, oov_fraction)
    })
}

/// The gold datasets an evaluation round runs, plus evaluation options.
#[derive(Debug, Clone, Default)]
pub struct EvalSuite {
    pub similarity: Vec<SimilarityDataset>,
    pub categorization: Vec<CategorizationDataset>,
    pub analogy: Vec<AnalogyDataset>,
    pub kmeans_seed: u64,
    /// When false (deterministic mode) `wall_ms` is recorded as 0 so logs are
    /// byte-identical across runs.
    pub record_wall_time: bool,
}

impl EvalSuite {
    pub fn is_configured(&self) -> bool {
        !self.similarity.is_empty() || !self.categorization.is_empty() || !self.analogy.is_empty()
    }

    /// Runs every configured evaluator against one snapshot. Evaluator
    /// failures become `status: error` records; they never abort training.
    pub fn run(&self, snapshot: &EmbeddingSnapshot, c: u64) -> Vec<EvalRecord> {
        let mut records = Vec::new();
        for ds in &self.similarity {
            records.push(self.finish(c, &ds.name, "spearman", evaluate_similarity(snapshot, ds)));
        }
        for ds in &self.categorization {
            records.push(self.finish(
                c,
                &ds.name,
                "purity",
                evaluate_categorization(snapshot, ds, self.kmeans_seed),
            ));
        }
        for ds in &self.analogy {
            records.push(self.finish(c, &ds.name, "analogy_accuracy", evaluate_analogy(snapshot, ds)));
        }
        records
    }

    fn finish(&self, c: u64, dataset: &str, metric: &str, outcome: Result<EvalRecord>) -> EvalRecord {
        let start = Instant::now();
        let mut rec = outcome.unwrap_or_else(|err| {
            eprintln!("warning: evaluator {metric} on {dataset} failed: {err}");
            record(dataset, metric, None, EvalStatus::Error, 1.0)
        });
        rec.c = c;
        rec.wall_ms = if self.record_wall_time {
            start.elapsed().as_millis() as u64
        } else {
            0
        };
        rec
    }
}

/// Result log: one JSON array of records, rewritten atomically (temp file +
/// rename) after each evaluation round.
#[derive(Debug)]
pub struct ResultLog {
    path: Option<PathBuf>,
    records: Vec<EvalRecord>,
}

impl ResultLog {
    pub fn new(path: Option<PathBuf>) -> Self {
        Self {
            path,
            records: Vec::new(),
        }
    }

    pub fn records(&self) -> &[EvalRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<EvalRecord> {
        self.records
    }

    pub fn append_round(&mut self, records: Vec<EvalRecord>) -> Result<()> {
        self.records.extend(records);
        self.flush()
    }

    pub fn flush(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let json = serde_json::to_string_pretty(&self.records).expect("records serialize");
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, json)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Loads a result log produced by [`ResultLog`].
pub fn load_records(path: impl AsRef<std::path::Path>) -> Result<Vec<EvalRecord>> {
    let text = std::fs::read_to_string(path.as_ref())?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidConfig(format!("bad result log {}: {e}", path.as_ref().display())))
}

/// Trains `model` over the whole stream, firing one evaluation round per
/// multiple of `period` reached or crossed by the instance counter.
///
/// The counter advances by the batch length after each `learn_many`; a batch
/// that jumps across several multiples fires one round per crossed multiple
/// (all at the same stream position). Each round snapshots the model once and
/// appends one record per configured dataset to `log`.
pub fn periodic_evaluation(
    stream: &mut DocumentStream,
    model: &mut dyn IncrementalModel,
    suite: &EvalSuite,
    period: u64,
    log: &mut ResultLog,
) -> Result<()> {
    assert!(period >= 1, "period must be >= 1");
    let mut c: u64 = 0;
    while let Some(batch) = stream.next_batch() {
        model.learn_many(&batch);
        let c_new = c + batch.len() as u64;
        let rounds = c_new / period - c / period;
        if rounds > 0 && suite.is_configured() {
            let snapshot = model.snapshot();
            for _ in 0..rounds {
                log.append_round(suite.run(&snapshot, c_new))?;
            }
        }
        c = c_new;
    }
    Ok(())
}
