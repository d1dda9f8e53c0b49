//! Trains the incremental word-context matrix model (IWCM): exact window
//! co-occurrence counters, PPMI association scores and incremental-PCA
//! projection to dense vectors.
//!
//! ```bash
//! cargo run --release --example train_wcm
//! ```

use std::path::PathBuf;

use streamvec::corpus::{DocumentStream, StreamConfig};
use streamvec::eval::metrics::cosine;
use streamvec::model::IncrementalModel;
use streamvec::wcm::{WcmConfig, WcmModel};

fn main() -> streamvec::Result<()> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/stream_corpus.txt");

    let mut model = WcmModel::new(WcmConfig::new(10_000, 500, 3, 50))?;
    let stream_config = StreamConfig::new(corpus, 32)?;
    let mut stream = DocumentStream::open(&stream_config)?;
    while let Some(batch) = stream.next_batch() {
        model.learn_many(&batch);
    }
    println!(
        "processed {} tokens; projector has folded {} rows",
        model.total_tokens(),
        model.projector().samples_seen()
    );

    // PPMI cells: associated pairs score high, unrelated pairs clamp to 0.
    for (w, c) in [("dog", "cat"), ("dog", "guitar"), ("bread", "cheese")] {
        let (Some(ws), Some(cs)) = (model.vocab().slot_of(w), model.context_vocab().slot_of(c))
        else {
            continue;
        };
        println!("ppmi({w}, {c}) = {:.3}", model.ppmi(ws, cs)?);
    }

    let snapshot = model.snapshot();
    for probe in ["milk", "storm"] {
        let Some(query) = snapshot.get(probe) else { continue };
        let mut scored: Vec<(&str, f64)> = snapshot
            .iter()
            .filter(|(w, _)| *w != probe)
            .map(|(w, v)| (w, cosine(query, v)))
            .collect();
        scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        let neighbors: Vec<&str> = scored.iter().take(5).map(|(w, _)| *w).collect();
        println!("{probe:>8} -> {}", neighbors.join(", "));
    }

    // Bootstrap flag: embeddings are marked until the projector has seen
    // enough rows (this run has seen plenty).
    let detailed = model.embedding_detailed("milk").unwrap();
    println!(
        "embedding dim {} (bootstrap: {})",
        detailed.vector.len(),
        detailed.bootstrap
    );
    Ok(())
}
