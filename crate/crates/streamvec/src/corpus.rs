//! Text stream simulation: turns a one-document-per-line file into token
//! sequences and mini-batches without ever holding the file in memory.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use crate::error::{Error, Result};

/// Characters stripped from token boundaries. `#`, `@` and internal hyphens
/// survive so hashtags and mentions stay in the vocabulary.
const STRIP_CHARS: &str = ".,;:!?\"'()[]{}";

/// A tokenized document (one line of the input stream).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub tokens: Vec<String>,
}

impl Document {
    pub fn new(tokens: Vec<String>) -> Self {
        debug_assert!(tokens.iter().all(|t| !t.is_empty()));
        Self { tokens }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Where to read the stream from and how many documents form a mini-batch.
/// `batch_size = 1` selects the instance-incremental path.
#[derive(Debug, Clone)]
pub struct StreamConfig {
    pub path: PathBuf,
    pub batch_size: usize,
}

impl StreamConfig {
    pub fn new(path: impl Into<PathBuf>, batch_size: usize) -> Result<Self> {
        if batch_size == 0 {
            return Err(Error::InvalidConfig("batch_size must be >= 1".into()));
        }
        Ok(Self {
            path: path.into(),
            batch_size,
        })
    }
}

/// Lowercases, splits on Unicode whitespace and strips leading/trailing
/// punctuation from each token. Tokens that become empty are dropped.
pub fn tokenize(line: &str) -> Vec<String> {
    line.to_lowercase()
        .split_whitespace()
        .map(|raw| raw.trim_matches(|c| STRIP_CHARS.contains(c)))
        .filter(|t| !t.is_empty())
        .map(str::to_owned)
        .collect()
}

/// Context tokens in the `2W` window around `position`: offsets `-W..-1` and
/// `+1..+W`, clipped to the sequence bounds. The center token itself is never
/// included.
pub fn contexts<'a>(position: usize, tokens: &'a [String], window_size: usize) -> Vec<&'a str> {
    assert!(position < tokens.len(), "position out of bounds");
    assert!(window_size >= 1, "window_size must be >= 1");
    let lo = position.saturating_sub(window_size);
    let hi = (position + window_size).min(tokens.len() - 1);
    (lo..=hi)
        .filter(|&i| i != position)
        .map(|i| tokens[i].as_str())
        .collect()
}

/// Single-pass document iterator over a corpus file.
///
/// Each line is read exactly once into a reused buffer, so peak memory is
/// bounded by the longest line regardless of file size. Lines that are not
/// valid UTF-8 are skipped and counted in [`DocumentStream::warnings`].
pub struct DocumentStream {
    reader: BufReader<File>,
    line_buf: Vec<u8>,
    batch_size: usize,
    docs_read: u64,
    warnings: u64,
}

impl DocumentStream {
    /// Opens the file named by `config`. A missing file is a fatal error.
    pub fn open(config: &StreamConfig) -> Result<Self> {
        let file = File::open(&config.path).map_err(|source| Error::CorpusOpen {
            path: config.path.clone(),
            source,
        })?;
        Ok(Self {
            reader: BufReader::new(file),
            line_buf: Vec::new(),
            batch_size: config.batch_size,
            docs_read: 0,
            warnings: 0,
        })
    }

    /// Number of documents yielded so far. Equals the line count after the
    /// stream is exhausted (single-pass discipline).
    pub fn docs_read(&self) -> u64 {
        self.docs_read
    }

    /// Number of undecodable lines skipped so far.
    pub fn warnings(&self) -> u64 {
        self.warnings
    }

    /// Next mini-batch of up to `batch_size` documents; `None` at end of
    /// stream. The final batch may be shorter.
    pub fn next_batch(&mut self) -> Option<Vec<Document>> {
        let mut batch = Vec::with_capacity(self.batch_size);
        while batch.len() < self.batch_size {
            match self.next() {
                Some(doc) => batch.push(doc),
                None => break,
            }
        }
        if batch.is_empty() {
            None
        } else {
            Some(batch)
        }
    }

    #[cfg(test)]
    pub(crate) fn line_buf_capacity(&self) -> usize {
        self.line_buf.capacity()
    }
}

impl Iterator for DocumentStream {
    type Item = Document;

    fn next(&mut self) -> Option<Document> {
        loop {
            self.line_buf.clear();
            match self.reader.read_until(b'\n', &mut self.line_buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(err) => {
                    // Treat a mid-stream read failure like an undecodable
                    // line rather than silently ending the stream early.
                    eprintln!("warning: corpus read error: {err}");
                    self.warnings += 1;
                    return None;
                }
            }
            while matches!(self.line_buf.last(), Some(b'\n') | Some(b'\r')) {
                self.line_buf.pop();
            }
            match std::str::from_utf8(&self.line_buf) {
                Ok(line) => {
                    self.docs_read += 1;
                    return Some(Document::new(tokenize(line)));
                }
                Err(_) => {
                    self.warnings += 1;
                    continue;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn temp_corpus(lines: &[&str]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for line in lines {
            writeln!(f, "{line}").unwrap();
        }
        f.flush().unwrap();
        f
    }

    fn stream(file: &tempfile::NamedTempFile, batch_size: usize) -> DocumentStream {
        let config = StreamConfig::new(file.path(), batch_size).unwrap();
        DocumentStream::open(&config).unwrap()
    }

    #[test]
    fn tokenize_strips_punctuation_and_lowercases() {
        assert_eq!(tokenize("Hello, World!"), vec!["hello", "world"]);
    }

    #[test]
    fn tokenize_whitespace_only_is_empty() {
        assert!(tokenize("  ").is_empty());
    }

    #[test]
    fn tokenize_keeps_hashtags_and_mentions() {
        assert_eq!(tokenize("#nlp rocks"), vec!["#nlp", "rocks"]);
        assert_eq!(tokenize("ask @dcc_uchile!"), vec!["ask", "@dcc_uchile"]);
        assert_eq!(tokenize("state-of-the-art"), vec!["state-of-the-art"]);
    }

    #[test]
    fn tokenize_drops_pure_punctuation_tokens() {
        assert_eq!(tokenize("a ... b"), vec!["a", "b"]);
    }

    #[test]
    fn contexts_full_window() {
        let t: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(contexts(1, &t, 1), vec!["a", "c"]);
    }

    #[test]
    fn contexts_clips_left() {
        let t: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        assert_eq!(contexts(0, &t, 2), vec!["b", "c"]);
    }

    #[test]
    fn contexts_singleton_is_empty() {
        let t: Vec<String> = vec!["a".to_string()];
        assert!(contexts(0, &t, 3).is_empty());
    }

    #[test]
    fn open_stream_reads_in_order() {
        let f = temp_corpus(&["a b", "c"]);
        let docs: Vec<Document> = stream(&f, 1).collect();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[0].tokens, vec!["a", "b"]);
        assert_eq!(docs[1].tokens, vec!["c"]);
    }

    #[test]
    fn empty_file_is_empty_iterator() {
        let f = temp_corpus(&[]);
        let mut s = stream(&f, 1);
        assert!(s.next().is_none());
        assert_eq!(s.docs_read(), 0);
    }

    #[test]
    fn batches_use_ceiling_division() {
        let f = temp_corpus(&["a", "b", "c"]);
        let mut s = stream(&f, 2);
        let sizes: Vec<usize> = std::iter::from_fn(|| s.next_batch().map(|b| b.len())).collect();
        assert_eq!(sizes, vec![2, 1]);
    }

    #[test]
    fn missing_file_is_fatal() {
        let config = StreamConfig::new("/nonexistent/corpus.txt", 1).unwrap();
        assert!(matches!(
            DocumentStream::open(&config),
            Err(Error::CorpusOpen { .. })
        ));
    }

    #[test]
    fn undecodable_line_is_skipped_with_warning() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(b"good line\n\xff\xfe broken\nanother\n").unwrap();
        f.flush().unwrap();
        let mut s = stream(&f, 1);
        let docs: Vec<Document> = (&mut s).collect();
        assert_eq!(docs.len(), 2);
        assert_eq!(s.warnings(), 1);
    }

    #[test]
    fn zero_batch_size_rejected() {
        assert!(StreamConfig::new("x.txt", 0).is_err());
    }

    #[test]
    fn each_line_read_exactly_once() {
        let lines: Vec<String> = (0..500).map(|i| format!("doc {i} tokens here")).collect();
        let refs: Vec<&str> = lines.iter().map(String::as_str).collect();
        let f = temp_corpus(&refs);
        let mut s = stream(&f, 7);
        let mut n = 0u64;
        while let Some(batch) = s.next_batch() {
            n += batch.len() as u64;
        }
        assert_eq!(n, 500);
        assert_eq!(s.docs_read(), 500);
    }

    #[test]
    fn iterator_memory_is_independent_of_file_length() {
        // The only per-stream allocation that could grow is the line buffer;
        // it must track the longest line, not the file length.
        let short: Vec<String> = (0..100).map(|i| format!("line {i} padpadpad")).collect();
        let long: Vec<String> = (0..1000).map(|i| format!("line {i} padpadpad")).collect();
        let short_refs: Vec<&str> = short.iter().map(String::as_str).collect();
        let long_refs: Vec<&str> = long.iter().map(String::as_str).collect();

        let fa = temp_corpus(&short_refs);
        let fb = temp_corpus(&long_refs);
        let mut sa = stream(&fa, 1);
        while sa.next().is_some() {}
        let mut sb = stream(&fb, 1);
        while sb.next().is_some() {}

        assert_eq!(sa.line_buf_capacity(), sb.line_buf_capacity());
    }

    proptest! {
        #[test]
        fn tokenize_is_deterministic(line in ".{0,200}") {
            prop_assert_eq!(tokenize(&line), tokenize(&line));
        }

        #[test]
        fn tokenize_never_yields_empty_tokens(line in ".{0,200}") {
            prop_assert!(tokenize(&line).iter().all(|t| !t.is_empty()));
        }

        #[test]
        fn contexts_symmetric_under_reversal(
            tokens in proptest::collection::vec("[a-z]{1,4}", 1..20),
            pos_seed in 0usize..20,
            w in 1usize..5,
        ) {
            let tokens: Vec<String> = tokens;
            let pos = pos_seed % tokens.len();
            let mut reversed = tokens.clone();
            reversed.reverse();
            let rpos = tokens.len() - 1 - pos;

            let mut fwd = contexts(pos, &tokens, w);
            let rev = contexts(rpos, &reversed, w);
            fwd.reverse();
            prop_assert_eq!(fwd, rev);
        }
    }
}
