//! Incremental word2vec: skip-gram (ISG) and continuous bag-of-words (ICBOW)
//! heads with negative sampling, fed by an adaptive unigram table that tracks
//! the smoothed word-frequency distribution without a second pass over the
//! stream.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::model::IncrementalModel;
use crate::vocab::{BoundedVocab, VocabEvent};

/// Sigmoid arguments are clamped to this range before exponentiation.
const SIGMOID_CLAMP: f64 = 30.0;

/// Redraw budget when a sampled negative hits the exclusion set.
const MAX_SAMPLE_ATTEMPTS: usize = 100;

fn sigmoid(x: f64) -> f64 {
    let x = x.clamp(-SIGMOID_CLAMP, SIGMOID_CLAMP);
    1.0 / (1.0 + (-x).exp())
}

/// `-ln(sigmoid(x))`, with the same clamp as [`sigmoid`].
fn neg_ln_sigmoid(x: f64) -> f64 {
    let x = x.clamp(-SIGMOID_CLAMP, SIGMOID_CLAMP);
    (1.0 + (-x).exp()).ln()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Derives independent RNG stream seeds from one master seed (splitmix64).
pub(crate) fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut x = master.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Adaptive unigram table: a fixed array of word slots whose composition
/// approximates the alpha-smoothed word-frequency distribution.
///
/// Per update of slot `i`, the smoothed-mass increment is
/// `F = Freqs[i]^alpha - (Freqs[i]-1)^alpha` and `z` accumulates every `F`.
/// While the table is filling, `F` copies of the slot are appended; once it
/// is full, `size_T * F / z` uniformly random positions are overwritten.
/// Fractional counts are resolved by probabilistic rounding, which preserves
/// them in expectation.
#[derive(Debug, Clone)]
pub struct UnigramTable {
    table: Vec<u32>,
    capacity: usize,
    freqs: Vec<u64>,
    z: f64,
    alpha: f64,
    rng: ChaCha8Rng,
}

impl UnigramTable {
    /// `capacity` is the table length (the paper's `size_T`); `vocab_size`
    /// bounds the slot space of the frequency array.
    pub fn new(capacity: usize, vocab_size: usize, alpha: f64, seed: u64) -> Self {
        assert!(capacity >= 1, "table capacity must be >= 1");
        Self {
            table: Vec::new(),
            capacity,
            freqs: vec![0; vocab_size],
            z: 0.0,
            alpha,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Current fill length `|T|`; equals the capacity after the fill phase.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Running smoothed mass; the sum of every `F` increment ever applied.
    pub fn z(&self) -> f64 {
        self.z
    }

    /// Occurrence count feeding the smoothing formula (reset when the slot
    /// is recycled).
    pub fn freq(&self, slot: usize) -> u64 {
        self.freqs[slot]
    }

    /// Raw table entries; exposed for distribution checks.
    pub fn entries(&self) -> &[u32] {
        &self.table
    }

    /// Records one occurrence of `slot` and folds it into the table.
    pub fn update(&mut self, slot: usize) {
        self.freqs[slot] += 1;
        let f = self.freqs[slot] as f64;
        let increment = f.powf(self.alpha) - (f - 1.0).powf(self.alpha);
        self.z += increment;

        if self.table.len() < self.capacity {
            let copies = self.probabilistic_round(increment);
            for _ in 0..copies {
                if self.table.len() == self.capacity {
                    break;
                }
                self.table.push(slot as u32);
            }
        } else {
            let copies = self.probabilistic_round(self.capacity as f64 * increment / self.z);
            for _ in 0..copies {
                let pos = self.rng.random_range(0..self.capacity);
                self.table[pos] = slot as u32;
            }
        }
    }

    /// Clears the occurrence count of a recycled slot. Stale table entries
    /// pointing at the slot are left in place; they now denote the new owner.
    pub fn reset_slot(&mut self, slot: usize) {
        self.freqs[slot] = 0;
    }

    /// Draws `num_ns` slots uniformly from the table. Draws landing in
    /// `exclude` are redrawn up to 100 times, then accepted, which prevents
    /// livelock on degenerate tables.
    pub fn sample(&mut self, num_ns: usize, exclude: &[usize]) -> Result<Vec<usize>> {
        if self.table.is_empty() {
            return Err(Error::EmptyTable);
        }
        let mut out = Vec::with_capacity(num_ns);
        for _ in 0..num_ns {
            let mut pick = 0usize;
            for _ in 0..MAX_SAMPLE_ATTEMPTS {
                let pos = self.rng.random_range(0..self.table.len());
                pick = self.table[pos] as usize;
                if !exclude.contains(&pick) {
                    break;
                }
            }
            out.push(pick);
        }
        Ok(out)
    }

    fn probabilistic_round(&mut self, x: f64) -> usize {
        let floor = x.floor();
        let extra = if self.rng.random::<f64>() < x - floor {
            1
        } else {
            0
        };
        floor as usize + extra
    }
}

/// Which prediction head drives the SGD updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum W2vHead {
    SkipGram,
    Cbow,
}

#[derive(Debug, Clone)]
pub struct W2vConfig {
    pub head: W2vHead,
    pub vocab_size: usize,
    pub emb_size: usize,
    pub window_size: usize,
    pub num_ns: usize,
    /// Fixed learning rate; a stream has no known end, so there is no decay
    /// schedule.
    pub lr: f64,
    pub table_size: usize,
    /// Unigram smoothing exponent.
    pub alpha: f64,
    pub seed: u64,
}

impl W2vConfig {
    pub fn new(head: W2vHead, vocab_size: usize, emb_size: usize) -> Self {
        Self {
            head,
            vocab_size,
            emb_size,
            window_size: 3,
            num_ns: 6,
            lr: 0.025,
            table_size: 10_000_000,
            alpha: 0.75,
            seed: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.vocab_size == 0 || self.emb_size == 0 {
            return Err(Error::InvalidConfig(
                "vocab_size and emb_size must be >= 1".into(),
            ));
        }
        if self.window_size == 0 {
            return Err(Error::InvalidConfig("window_size must be >= 1".into()));
        }
        if !(self.lr > 0.0) {
            return Err(Error::InvalidConfig("lr must be > 0".into()));
        }
        if self.table_size == 0 {
            return Err(Error::InvalidConfig("table_size must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidConfig("alpha must be in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Running loss statistics since the last reset.
#[derive(Debug, Clone, Copy, Default)]
pub struct LossStats {
    pub steps: u64,
    pub loss_sum: f64,
}

impl LossStats {
    pub fn mean(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.loss_sum / self.steps as f64
        }
    }
}

/// Incremental word2vec model (ISG or ICBOW head).
///
/// Two dense parameter matrices of shape `vocab_size x emb_size`: `in_emb`
/// holds the target vectors returned as embeddings, `out_emb` the context
/// vectors used by the output layer. Rows of recycled slots are reinitialized
/// before reuse; rows of free slots are never read.
pub struct W2vModel {
    config: W2vConfig,
    vocab: BoundedVocab,
    in_emb: Vec<f64>,
    out_emb: Vec<f64>,
    table: UnigramTable,
    init_rng: ChaCha8Rng,
    stats: LossStats,
    skipped_empty_contexts: u64,
}

impl W2vModel {
    pub fn new(config: W2vConfig) -> Result<Self> {
        config.validate()?;
        let table = UnigramTable::new(
            config.table_size,
            config.vocab_size,
            config.alpha,
            derive_seed(config.seed, 1),
        );
        Ok(Self {
            vocab: BoundedVocab::new(config.vocab_size),
            in_emb: vec![0.0; config.vocab_size * config.emb_size],
            out_emb: vec![0.0; config.vocab_size * config.emb_size],
            table,
            init_rng: ChaCha8Rng::seed_from_u64(derive_seed(config.seed, 0)),
            stats: LossStats::default(),
            skipped_empty_contexts: 0,
            config,
        })
    }

    pub fn config(&self) -> &W2vConfig {
        &self.config
    }

    pub fn table(&self) -> &UnigramTable {
        &self.table
    }

    pub fn loss_stats(&self) -> LossStats {
        self.stats
    }

    pub fn reset_loss_stats(&mut self) {
        self.stats = LossStats::default();
    }

    /// CBOW steps skipped because no window token was resident.
    pub fn skipped_empty_contexts(&self) -> u64 {
        self.skipped_empty_contexts
    }

    pub fn in_row(&self, slot: usize) -> &[f64] {
        let d = self.config.emb_size;
        &self.in_emb[slot * d..(slot + 1) * d]
    }

    pub fn out_row(&self, slot: usize) -> &[f64] {
        let d = self.config.emb_size;
        &self.out_emb[slot * d..(slot + 1) * d]
    }

    /// Overwrites a parameter row; intended for initialization experiments
    /// and gradient checks.
    pub fn set_in_row(&mut self, slot: usize, row: &[f64]) {
        self.in_row_mut(slot).copy_from_slice(row);
    }

    pub fn set_out_row(&mut self, slot: usize, row: &[f64]) {
        self.out_row_mut(slot).copy_from_slice(row);
    }

    fn in_row_mut(&mut self, slot: usize) -> &mut [f64] {
        let d = self.config.emb_size;
        &mut self.in_emb[slot * d..(slot + 1) * d]
    }

    fn out_row_mut(&mut self, slot: usize) -> &mut [f64] {
        let d = self.config.emb_size;
        &mut self.out_emb[slot * d..(slot + 1) * d]
    }

    /// Classic word2vec initialization: input rows uniform in
    /// `(-0.5/emb_size, +0.5/emb_size)`, output rows zero.
    fn init_slot(&mut self, slot: usize) {
        let bound = 0.5 / self.config.emb_size as f64;
        let d = self.config.emb_size;
        for k in 0..d {
            self.in_emb[slot * d + k] = self.init_rng.random_range(-bound..bound);
            self.out_emb[slot * d + k] = 0.0;
        }
    }

    /// Observes one token: vocabulary update, row (re)initialization on
    /// insertion, frequency reset of recycled slots. Returns the token's
    /// slot, or `None` when the sketch dropped it.
    fn admit(&mut self, token: &str) -> Option<usize> {
        match self.vocab.observe(token) {
            VocabEvent::Incremented { slot } => Some(slot),
            VocabEvent::Inserted { slot } => {
                self.init_slot(slot);
                Some(slot)
            }
            VocabEvent::EvictedThenInserted { slot, evicted } => {
                for e in &evicted {
                    self.table.reset_slot(e.slot);
                }
                self.init_slot(slot);
                Some(slot)
            }
            VocabEvent::Dropped => None,
        }
    }

    /// Loss of one skip-gram/negative-sampling triple at the current
    /// parameters: `-ln s(u_c . v_t) - sum_n ln s(-u_n . v_t)`.
    pub fn sgns_loss(&self, target: usize, context: usize, negatives: &[usize]) -> f64 {
        let vt = self.in_row(target);
        let mut loss = neg_ln_sigmoid(dot(self.out_row(context), vt));
        for &n in negatives {
            loss += neg_ln_sigmoid(-dot(self.out_row(n), vt));
        }
        loss
    }

    /// One SGD step on a skip-gram triple; returns the pre-update loss.
    ///
    /// All gradients are computed from pre-update parameters and accumulated
    /// per row, so duplicate negatives behave like the analytic gradient of
    /// the summed loss.
    pub fn sgns_step(&mut self, target: usize, context: usize, negatives: &[usize]) -> f64 {
        let d = self.config.emb_size;
        let lr = self.config.lr;
        let vt: Vec<f64> = self.in_row(target).to_vec();

        let mut loss = 0.0;
        let mut grad_vt = vec![0.0; d];
        let mut out_grads: BTreeMap<usize, Vec<f64>> = BTreeMap::new();

        {
            let uc = self.out_row(context);
            let x = dot(uc, &vt);
            loss += neg_ln_sigmoid(x);
            let g = sigmoid(x) - 1.0;
            for k in 0..d {
                grad_vt[k] += g * uc[k];
            }
            let entry = out_grads.entry(context).or_insert_with(|| vec![0.0; d]);
            for k in 0..d {
                entry[k] += g * vt[k];
            }
        }
        for &n in negatives {
            let un = self.out_row(n);
            let x = dot(un, &vt);
            loss += neg_ln_sigmoid(-x);
            let g = sigmoid(x);
            for k in 0..d {
                grad_vt[k] += g * un[k];
            }
            let entry = out_grads.entry(n).or_insert_with(|| vec![0.0; d]);
            for k in 0..d {
                entry[k] += g * vt[k];
            }
        }

        {
            let row = self.in_row_mut(target);
            for k in 0..d {
                row[k] -= lr * grad_vt[k];
            }
        }
        for (slot, grad) in out_grads {
            let row = self.out_row_mut(slot);
            for k in 0..d {
                row[k] -= lr * grad[k];
            }
        }

        self.stats.steps += 1;
        self.stats.loss_sum += loss;
        loss
    }

    /// Loss of one CBOW step at the current parameters, with `h` the mean of
    /// the context input rows: `-ln s(u_t . h) - sum_n ln s(-u_n . h)`.
    pub fn cbow_loss(&self, context_slots: &[usize], target: usize, negatives: &[usize]) -> f64 {
        assert!(!context_slots.is_empty());
        let h = self.context_mean(context_slots);
        let mut loss = neg_ln_sigmoid(dot(self.out_row(target), &h));
        for &n in negatives {
            loss += neg_ln_sigmoid(-dot(self.out_row(n), &h));
        }
        loss
    }

    /// One SGD step of the CBOW head; returns the pre-update loss, or `None`
    /// (counted) when the context list is empty.
    pub fn cbow_step(
        &mut self,
        context_slots: &[usize],
        target: usize,
        negatives: &[usize],
    ) -> Option<f64> {
        if context_slots.is_empty() {
            self.skipped_empty_contexts += 1;
            return None;
        }
        let d = self.config.emb_size;
        let lr = self.config.lr;
        let h = self.context_mean(context_slots);

        let mut loss = 0.0;
        let mut grad_h = vec![0.0; d];
        let mut out_grads: BTreeMap<usize, Vec<f64>> = BTreeMap::new();

        {
            let ut = self.out_row(target);
            let x = dot(ut, &h);
            loss += neg_ln_sigmoid(x);
            let g = sigmoid(x) - 1.0;
            for k in 0..d {
                grad_h[k] += g * ut[k];
            }
            let entry = out_grads.entry(target).or_insert_with(|| vec![0.0; d]);
            for k in 0..d {
                entry[k] += g * h[k];
            }
        }
        for &n in negatives {
            let un = self.out_row(n);
            let x = dot(un, &h);
            loss += neg_ln_sigmoid(-x);
            let g = sigmoid(x);
            for k in 0..d {
                grad_h[k] += g * un[k];
            }
            let entry = out_grads.entry(n).or_insert_with(|| vec![0.0; d]);
            for k in 0..d {
                entry[k] += g * h[k];
            }
        }

        // The gradient w.r.t. h is divided equally among the contributing
        // context rows; a slot listed twice receives a double share.
        let share = 1.0 / context_slots.len() as f64;
        let mut in_grads: BTreeMap<usize, f64> = BTreeMap::new();
        for &c in context_slots {
            *in_grads.entry(c).or_insert(0.0) += share;
        }
        for (slot, weight) in in_grads {
            let row = self.in_row_mut(slot);
            for k in 0..d {
                row[k] -= lr * weight * grad_h[k];
            }
        }
        for (slot, grad) in out_grads {
            let row = self.out_row_mut(slot);
            for k in 0..d {
                row[k] -= lr * grad[k];
            }
        }

        self.stats.steps += 1;
        self.stats.loss_sum += loss;
        Some(loss)
    }

    fn context_mean(&self, context_slots: &[usize]) -> Vec<f64> {
        let d = self.config.emb_size;
        let mut h = vec![0.0; d];
        for &c in context_slots {
            let row = self.in_row(c);
            for k in 0..d {
                h[k] += row[k];
            }
        }
        let n = context_slots.len() as f64;
        h.iter_mut().for_each(|x| *x /= n);
        h
    }

    fn window_positions(&self, center: usize, len: usize) -> impl Iterator<Item = usize> {
        let w = self.config.window_size;
        let lo = center.saturating_sub(w);
        let hi = (center + w).min(len - 1);
        (lo..=hi).filter(move |&j| j != center)
    }
}

impl IncrementalModel for W2vModel {
    fn learn_one(&mut self, doc: &Document) {
        // Vocabulary and unigram-table pass first, so window pairs can see
        // words that first appear later in the same document.
        for token in &doc.tokens {
            if let Some(slot) = self.admit(token) {
                self.table.update(slot);
            }
        }

        let n = doc.tokens.len();
        for i in 0..n {
            let Some(target) = self.vocab.slot_of(&doc.tokens[i]) else {
                continue;
            };
            match self.config.head {
                W2vHead::SkipGram => {
                    for j in self.window_positions(i, n).collect::<Vec<_>>() {
                        let Some(context) = self.vocab.slot_of(&doc.tokens[j]) else {
                            continue;
                        };
                        let negatives = self
                            .table
                            .sample(self.config.num_ns, &[target, context])
                            .expect("table is filled before pairs are formed");
                        self.sgns_step(target, context, &negatives);
                    }
                }
                W2vHead::Cbow => {
                    let context_slots: Vec<usize> = self
                        .window_positions(i, n)
                        .filter_map(|j| self.vocab.slot_of(&doc.tokens[j]))
                        .collect();
                    if context_slots.is_empty() {
                        self.skipped_empty_contexts += 1;
                        continue;
                    }
                    let negatives = self
                        .table
                        .sample(self.config.num_ns, &[target])
                        .expect("table is filled before pairs are formed");
                    self.cbow_step(&context_slots, target, &negatives);
                }
            }
        }
    }

    fn embedding(&self, word: &str) -> Option<Vec<f64>> {
        self.vocab
            .slot_of(word)
            .map(|slot| self.in_row(slot).to_vec())
    }

    fn emb_size(&self) -> usize {
        self.config.emb_size
    }

    fn vocab(&self) -> &BoundedVocab {
        &self.vocab
    }
}
