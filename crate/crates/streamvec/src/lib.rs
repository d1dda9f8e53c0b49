//! Incremental word embeddings from unbounded text streams under fixed
//! memory.
//!
//! Three models learn word vectors one document (or mini-batch) at a time,
//! inspecting each document exactly once:
//!
//! - [`wcm::WcmModel`] — incremental word-context matrix: sparse window
//!   co-occurrence counters scored with positive pointwise mutual
//!   information and projected to dense vectors by incremental PCA.
//! - [`w2v::W2vModel`] with the skip-gram head — incremental skip-gram with
//!   negative sampling, fed by an adaptive unigram table.
//! - [`w2v::W2vModel`] with the CBOW head — same machinery, predicting the
//!   target word from the mean of its context vectors.
//!
//! Vocabularies are bounded by a Misra-Gries frequency sketch
//! ([`vocab::BoundedVocab`]): at most `capacity` words are resident, heavy
//! hitters are guaranteed to survive, and evicted slots are recycled.
//! Embedding quality is tracked during training by the periodic-evaluation
//! harness ([`eval::periodic_evaluation`]), which scores the live model on
//! similarity, categorization and analogy gold sets every `p` instances and
//! appends the results to a JSON log.
//!
//! # Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --release --example train_skipgram    # ISG + nearest neighbors
//! cargo run --release --example train_cbow        # ICBOW + loss curve
//! cargo run --release --example train_wcm         # IWCM counts, PPMI, PCA
//! cargo run --release --example vocab_sketch      # Misra-Gries behavior
//! cargo run --release --example unigram_table     # adaptive table shares
//! cargo run --release --example periodic_eval     # evaluation time series
//! cargo run --release --example grid_rank         # mini grid + ranking
//! ```
//!
//! The same functionality is reachable from the `streamvec` binary
//! (subcommands `train`, `grid`, `rank`, `dump`); see the README.
//!
//! # Quick start
//!
//! ```no_run
//! use streamvec::corpus::{DocumentStream, StreamConfig};
//! use streamvec::model::IncrementalModel;
//! use streamvec::w2v::{W2vConfig, W2vHead, W2vModel};
//!
//! # fn main() -> streamvec::Result<()> {
//! let mut model = W2vModel::new(W2vConfig::new(W2vHead::SkipGram, 100_000, 100))?;
//! let config = StreamConfig::new("tweets.txt", 32)?;
//! let mut stream = DocumentStream::open(&config)?;
//! while let Some(batch) = stream.next_batch() {
//!     model.learn_many(&batch);
//! }
//! let vector = model.embedding("stream");
//! # let _ = vector;
//! # Ok(())
//! # }
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod model;
pub mod pca;
pub mod vocab;
pub mod w2v;
pub mod wcm;

pub use error::{Error, Result};
