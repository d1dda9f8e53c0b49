//! Incremental word-context matrix model.
//!
//! Maintains exact sparse co-occurrence counters over a 2W sliding window,
//! scores word/context association with positive pointwise mutual
//! information, and projects the sparse PPMI rows to dense vectors with
//! incremental PCA. Rows touched by training are queued and folded into the
//! projector once enough distinct rows accumulate.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::corpus::{contexts, Document};
use crate::error::{Error, Result};
use crate::model::IncrementalModel;
use crate::pca::IncrementalPca;
use crate::vocab::{BoundedVocab, VocabEvent};

/// Positive pointwise mutual information of one cell:
/// `max(0, log2(count(w,c) * D / (count(w) * count(c))))`, with a zero pair
/// count mapping to 0.
pub fn ppmi_value(count_wc: u64, count_w: u64, count_c: u64, d: u64) -> Result<f64> {
    if count_w == 0 || count_c == 0 {
        return Err(Error::UndefinedPpmiCell {
            word_count: count_w,
            context_count: count_c,
        });
    }
    if count_wc == 0 {
        return Ok(0.0);
    }
    let ratio = (count_wc as f64 * d as f64) / (count_w as f64 * count_c as f64);
    Ok(ratio.log2().max(0.0))
}

#[derive(Debug, Clone)]
pub struct WcmConfig {
    /// Word vocabulary capacity (V).
    pub vocab_size: usize,
    /// Context vocabulary capacity (C); also the PPMI row length.
    pub context_size: usize,
    pub window_size: usize,
    /// Output dimensionality after PCA.
    pub emb_size: usize,
    /// Distinct touched rows required before a projector update; a partial
    /// update needs at least `emb_size` samples for a rank-`emb_size` basis.
    pub min_batch: usize,
    /// Optional context-distribution smoothing exponent. When set, `count(c)`
    /// in the PPMI formula is replaced by the smoothed count
    /// `count(c)^beta * (sum_c count(c) / sum_c count(c)^beta)`, which at
    /// `beta = 1` reduces exactly to the unsmoothed formula.
    pub ppmi_smoothing: Option<f64>,
}

impl WcmConfig {
    pub fn new(vocab_size: usize, context_size: usize, window_size: usize, emb_size: usize) -> Self {
        Self {
            vocab_size,
            context_size,
            window_size,
            emb_size,
            min_batch: emb_size,
            ppmi_smoothing: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.window_size == 0 {
            return Err(Error::InvalidConfig("window_size must be >= 1".into()));
        }
        if self.emb_size == 0 || self.emb_size > self.context_size {
            return Err(Error::InvalidConfig(format!(
                "emb_size must be in [1, context_size={}], got {}",
                self.context_size, self.emb_size
            )));
        }
        if self.min_batch < self.emb_size {
            return Err(Error::InvalidConfig(
                "min_batch must be at least emb_size".into(),
            ));
        }
        if let Some(beta) = self.ppmi_smoothing {
            if !(beta > 0.0 && beta <= 1.0) {
                return Err(Error::InvalidConfig(
                    "ppmi smoothing exponent must be in (0, 1]".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Word-keyed copy of every counter; used to compare model states exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WcmCounters {
    pub d: u64,
    pub word: BTreeMap<String, u64>,
    pub context: BTreeMap<String, u64>,
    pub pair: BTreeMap<(String, String), u64>,
}

/// Embedding plus a flag telling whether it came from the PCA projector or
/// from the raw-row bootstrap path.
#[derive(Debug, Clone, PartialEq)]
pub struct WcmEmbedding {
    pub vector: Vec<f64>,
    pub bootstrap: bool,
}

pub struct WcmModel {
    config: WcmConfig,
    vocab: BoundedVocab,
    context_vocab: BoundedVocab,
    /// word_slot → context_slot → co-occurrence count.
    rows: HashMap<usize, HashMap<usize, u64>>,
    /// context_slot → word slots with a nonzero cell in that column.
    col_index: HashMap<usize, HashSet<usize>>,
    word_counts: HashMap<usize, u64>,
    context_counts: HashMap<usize, u64>,
    d_total: u64,
    /// Running context-distribution sums, maintained only when smoothing is
    /// enabled: sum of counts and sum of counts^beta over resident contexts.
    context_total: u64,
    smoothed_mass: f64,
    projector: IncrementalPca,
    /// Word slots touched since the last projector refresh.
    queue: BTreeSet<usize>,
}

impl WcmModel {
    pub fn new(config: WcmConfig) -> Result<Self> {
        config.validate()?;
        let projector = IncrementalPca::new(config.context_size, config.emb_size)?;
        Ok(Self {
            vocab: BoundedVocab::new(config.vocab_size),
            context_vocab: BoundedVocab::new(config.context_size),
            rows: HashMap::new(),
            col_index: HashMap::new(),
            word_counts: HashMap::new(),
            context_counts: HashMap::new(),
            d_total: 0,
            context_total: 0,
            smoothed_mass: 0.0,
            projector,
            queue: BTreeSet::new(),
            config,
        })
    }

    pub fn config(&self) -> &WcmConfig {
        &self.config
    }

    /// Total tokens processed (the D of the PPMI formula).
    pub fn total_tokens(&self) -> u64 {
        self.d_total
    }

    pub fn context_vocab(&self) -> &BoundedVocab {
        &self.context_vocab
    }

    /// PPMI of a (word slot, context slot) cell from the current counters.
    pub fn ppmi(&self, word_slot: usize, context_slot: usize) -> Result<f64> {
        let pair = self
            .rows
            .get(&word_slot)
            .and_then(|r| r.get(&context_slot))
            .copied()
            .unwrap_or(0);
        let cw = self.word_counts.get(&word_slot).copied().unwrap_or(0);
        let cc = self.context_counts.get(&context_slot).copied().unwrap_or(0);
        self.cell(pair, cw, cc)
    }

    fn cell(&self, pair: u64, cw: u64, cc: u64) -> Result<f64> {
        let Some(beta) = self.config.ppmi_smoothing else {
            return ppmi_value(pair, cw, cc, self.d_total);
        };
        if cw == 0 || cc == 0 {
            return Err(Error::UndefinedPpmiCell {
                word_count: cw,
                context_count: cc,
            });
        }
        if pair == 0 {
            return Ok(0.0);
        }
        let smoothed_cc =
            (cc as f64).powf(beta) * (self.context_total as f64 / self.smoothed_mass);
        let ratio = (pair as f64 * self.d_total as f64) / (cw as f64 * smoothed_cc);
        Ok(ratio.log2().max(0.0))
    }

    /// Dense PPMI row for a word slot (length `context_size`). Cells whose
    /// pair count is zero are zero.
    pub fn ppmi_row(&self, word_slot: usize) -> Vec<f64> {
        let mut row = vec![0.0; self.config.context_size];
        let Some(cells) = self.rows.get(&word_slot) else {
            return row;
        };
        let cw = self.word_counts.get(&word_slot).copied().unwrap_or(0);
        for (&c, &pair) in cells {
            let cc = self.context_counts.get(&c).copied().unwrap_or(0);
            if let Ok(v) = self.cell(pair, cw, cc) {
                row[c] = v;
            }
        }
        row
    }

    /// Embedding with its provenance flag. `None` for non-resident words.
    pub fn embedding_detailed(&self, word: &str) -> Option<WcmEmbedding> {
        let slot = self.vocab.slot_of(word)?;
        let has_pairs = self.rows.get(&slot).is_some_and(|r| !r.is_empty());
        if !has_pairs {
            // All-zero PPMI row: no information to project.
            return Some(WcmEmbedding {
                vector: vec![0.0; self.config.emb_size],
                bootstrap: !self.projector.is_fitted(),
            });
        }
        let row = self.ppmi_row(slot);
        if self.projector.is_fitted() {
            Some(WcmEmbedding {
                vector: self.projector.project(&row),
                bootstrap: false,
            })
        } else {
            Some(WcmEmbedding {
                vector: row[..self.config.emb_size].to_vec(),
                bootstrap: true,
            })
        }
    }

    /// Number of rows waiting for the next projector update.
    pub fn queued_rows(&self) -> usize {
        self.queue.len()
    }

    pub fn projector(&self) -> &IncrementalPca {
        &self.projector
    }

    /// One incremental-PCA partial update consuming the queued rows, deferred
    /// until at least `min_batch` distinct rows are queued.
    pub fn refresh_projector(&mut self) {
        if self.queue.len() < self.config.min_batch {
            return;
        }
        let slots: Vec<usize> = std::mem::take(&mut self.queue).into_iter().collect();
        let rows: Vec<Vec<f64>> = slots.iter().map(|&s| self.ppmi_row(s)).collect();
        self.projector.partial_fit(&rows);
    }

    /// Word-keyed snapshot of every counter.
    pub fn counters(&self) -> WcmCounters {
        let word = self
            .word_counts
            .iter()
            .map(|(&slot, &n)| (self.vocab.word_at(slot).unwrap().to_owned(), n))
            .collect();
        let context = self
            .context_counts
            .iter()
            .map(|(&slot, &n)| (self.context_vocab.word_at(slot).unwrap().to_owned(), n))
            .collect();
        let mut pair = BTreeMap::new();
        for (&w, cells) in &self.rows {
            let w_word = self.vocab.word_at(w).unwrap().to_owned();
            for (&c, &n) in cells {
                let c_word = self.context_vocab.word_at(c).unwrap().to_owned();
                pair.insert((w_word.clone(), c_word), n);
            }
        }
        WcmCounters {
            d: self.d_total,
            word,
            context,
            pair,
        }
    }

    fn drop_word_row(&mut self, word_slot: usize) {
        if let Some(cells) = self.rows.remove(&word_slot) {
            for c in cells.keys() {
                if let Some(col) = self.col_index.get_mut(c) {
                    col.remove(&word_slot);
                }
            }
        }
        self.word_counts.remove(&word_slot);
        self.queue.remove(&word_slot);
    }

    fn drop_context_column(&mut self, context_slot: usize) {
        if let Some(col) = self.col_index.remove(&context_slot) {
            for w in col {
                if let Some(row) = self.rows.get_mut(&w) {
                    row.remove(&context_slot);
                }
            }
        }
        if let Some(n) = self.context_counts.remove(&context_slot) {
            if let Some(beta) = self.config.ppmi_smoothing {
                self.context_total -= n;
                self.smoothed_mass -= (n as f64).powf(beta);
            }
        }
    }

    fn bump_context_count(&mut self, context_slot: usize) {
        let n = self.context_counts.entry(context_slot).or_insert(0);
        *n += 1;
        if let Some(beta) = self.config.ppmi_smoothing {
            let new = *n as f64;
            self.context_total += 1;
            self.smoothed_mass += new.powf(beta) - (new - 1.0).powf(beta);
        }
    }
}

impl IncrementalModel for WcmModel {
    fn learn_one(&mut self, doc: &Document) {
        for (position, token) in doc.tokens.iter().enumerate() {
            if let VocabEvent::EvictedThenInserted { evicted, .. } = self.vocab.observe(token) {
                for e in &evicted {
                    self.drop_word_row(e.slot);
                }
            }
            self.d_total += 1;
            // Dropped tokens contribute to D but produce no counters.
            let word_slot = self.vocab.slot_of(token);
            if let Some(w) = word_slot {
                *self.word_counts.entry(w).or_insert(0) += 1;
                self.queue.insert(w);
            }

            for ctx in contexts(position, &doc.tokens, self.config.window_size) {
                if let VocabEvent::EvictedThenInserted { evicted, .. } =
                    self.context_vocab.observe(ctx)
                {
                    for e in &evicted {
                        self.drop_context_column(e.slot);
                    }
                }
                let Some(c) = self.context_vocab.slot_of(ctx) else {
                    continue;
                };
                self.bump_context_count(c);
                if let Some(w) = word_slot {
                    *self.rows.entry(w).or_default().entry(c).or_insert(0) += 1;
                    self.col_index.entry(c).or_default().insert(w);
                }
            }
        }
        self.refresh_projector();
    }

    fn embedding(&self, word: &str) -> Option<Vec<f64>> {
        self.embedding_detailed(word).map(|e| e.vector)
    }

    fn emb_size(&self) -> usize {
        self.config.emb_size
    }

    fn vocab(&self) -> &BoundedVocab {
        &self.vocab
    }
}
