//! Trains the incremental skip-gram model (ISG) on the bundled synthetic
//! stream and prints nearest neighbors for a few probe words.
//!
//! ```bash
//! cargo run --release --example train_skipgram
//! ```

use std::path::PathBuf;

use streamvec::corpus::{DocumentStream, StreamConfig};
use streamvec::eval::metrics::cosine;
use streamvec::model::IncrementalModel;
use streamvec::w2v::{W2vConfig, W2vHead, W2vModel};

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/stream_corpus.txt")
}

fn main() -> streamvec::Result<()> {
    let mut config = W2vConfig::new(W2vHead::SkipGram, 10_000, 50);
    config.window_size = 3;
    config.num_ns = 6;
    config.table_size = 100_000;
    config.seed = 7;
    let mut model = W2vModel::new(config)?;

    let stream_config = StreamConfig::new(corpus_path(), 32)?;
    let mut stream = DocumentStream::open(&stream_config)?;
    let mut docs = 0u64;
    while let Some(batch) = stream.next_batch() {
        model.learn_many(&batch);
        docs += batch.len() as u64;
        if docs % 2048 == 0 {
            println!(
                "{docs:>6} docs, {} resident words, mean step loss {:.4}",
                model.vocab().len(),
                model.loss_stats().mean()
            );
            model.reset_loss_stats();
        }
    }
    println!("done: {docs} documents, {} SGD steps\n", model.loss_stats().steps);

    let snapshot = model.snapshot();
    for probe in ["dog", "red", "guitar", "rain"] {
        let Some(query) = snapshot.get(probe) else { continue };
        let mut scored: Vec<(&str, f64)> = snapshot
            .iter()
            .filter(|(w, _)| *w != probe)
            .map(|(w, v)| (w, cosine(query, v)))
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let neighbors: Vec<String> = scored
            .iter()
            .take(5)
            .map(|(w, s)| format!("{w} ({s:.2})"))
            .collect();
        println!("{probe:>8} -> {}", neighbors.join(", "));
    }
    Ok(())
}
