//! Common interface implemented by every incremental embedding model.

use std::collections::HashMap;

use crate::corpus::Document;
use crate::vocab::BoundedVocab;

/// An embedding model that learns from a stream one document (or one
/// mini-batch) at a time and can produce a vector for any resident word at
/// any point of the stream.
pub trait IncrementalModel {
    /// Train on a single document.
    fn learn_one(&mut self, doc: &Document);

    /// Train on a mini-batch; equivalent to sequential [`learn_one`] calls.
    ///
    /// [`learn_one`]: IncrementalModel::learn_one
    fn learn_many(&mut self, batch: &[Document]) {
        for doc in batch {
            self.learn_one(doc);
        }
    }

    /// Current vector for `word`, or `None` if the word is not resident.
    fn embedding(&self, word: &str) -> Option<Vec<f64>>;

    /// Output dimensionality.
    fn emb_size(&self) -> usize;

    /// The word vocabulary.
    fn vocab(&self) -> &BoundedVocab;

    /// Copies the full word → vector map so evaluation cannot observe a
    /// half-updated model. Words are ordered by slot.
    fn snapshot(&self) -> EmbeddingSnapshot {
        let mut words = Vec::new();
        let mut vectors = Vec::new();
        for (word, _, _) in self.vocab().resident_sorted_by_slot() {
            if let Some(vec) = self.embedding(&word) {
                words.push(word);
                vectors.push(vec);
            }
        }
        EmbeddingSnapshot::new(self.emb_size(), words, vectors)
    }
}

/// Immutable copy of a model's resident vocabulary and vectors, taken at one
/// point of the stream.
#[derive(Debug, Clone)]
pub struct EmbeddingSnapshot {
    dim: usize,
    words: Vec<String>,
    vectors: Vec<Vec<f64>>,
    index: HashMap<String, usize>,
}

impl EmbeddingSnapshot {
    pub fn new(dim: usize, words: Vec<String>, vectors: Vec<Vec<f64>>) -> Self {
        assert_eq!(words.len(), vectors.len());
        debug_assert!(vectors.iter().all(|v| v.len() == dim));
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Self {
            dim,
            words,
            vectors,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.index.get(word).map(|&i| self.vectors[i].as_slice())
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    /// `(word, vector)` pairs in slot order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.words
            .iter()
            .zip(&self.vectors)
            .map(|(w, v)| (w.as_str(), v.as_slice()))
    }

    /// Mean over all resident vectors; `None` when the snapshot is empty.
    /// This is the vector assigned to out-of-vocabulary evaluation words.
    pub fn mean_vector(&self) -> Option<Vec<f64>> {
        if self.vectors.is_empty() {
            return None;
        }
        let mut mean = vec![0.0; self.dim];
        for v in &self.vectors {
            for (m, x) in mean.iter_mut().zip(v) {
                *m += x;
            }
        }
        let n = self.vectors.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        Some(mean)
    }
}
