//! Trains the incremental CBOW model (ICBOW) one instance at a time and
//! prints the loss trend, showing the instance-incremental path
//! (batch size 1).
//!
//! ```bash
//! cargo run --release --example train_cbow
//! ```

use std::path::PathBuf;

use streamvec::corpus::{DocumentStream, StreamConfig};
use streamvec::model::IncrementalModel;
use streamvec::w2v::{W2vConfig, W2vHead, W2vModel};

fn main() -> streamvec::Result<()> {
    let corpus = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/stream_corpus.txt");

    let mut config = W2vConfig::new(W2vHead::Cbow, 10_000, 50);
    config.window_size = 3;
    config.num_ns = 6;
    config.table_size = 100_000;
    let mut model = W2vModel::new(config)?;

    // batch_size = 1: parameters update after every single document.
    let stream_config = StreamConfig::new(corpus, 1)?;
    let stream = DocumentStream::open(&stream_config)?;

    let mut docs = 0u64;
    for doc in stream {
        model.learn_one(&doc);
        docs += 1;
        if docs % 1000 == 0 {
            println!(
                "{docs:>6} docs  mean loss {:.4}  ({} steps, {} empty-context skips)",
                model.loss_stats().mean(),
                model.loss_stats().steps,
                model.skipped_empty_contexts()
            );
            model.reset_loss_stats();
        }
    }

    println!("\nvectors can be read at any time during the stream:");
    for word in ["cheese", "piano"] {
        if let Some(v) = model.embedding(word) {
            let preview: Vec<String> = v.iter().take(6).map(|x| format!("{x:+.3}")).collect();
            println!("{word:>8} = [{} ...]", preview.join(", "));
        }
    }
    Ok(())
}
