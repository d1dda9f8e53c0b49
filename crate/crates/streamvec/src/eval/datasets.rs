//! Gold-standard dataset loaders.
//!
//! Formats: similarity is TSV `word1<TAB>word2<TAB>score`, categorization is
//! TSV `word<TAB>category`, analogy is four space-separated words per line.
//! Lines starting with `#` are comments. Words are case-folded to match the
//! tokenizer.

use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SimilarityPair {
    pub word1: String,
    pub word2: String,
    pub score: f64,
}

/// Word-pair relatedness dataset with human judgment scores.
#[derive(Debug, Clone)]
pub struct SimilarityDataset {
    pub name: String,
    pub pairs: Vec<SimilarityPair>,
}

/// Word → gold category dataset.
#[derive(Debug, Clone)]
pub struct CategorizationDataset {
    pub name: String,
    pub rows: Vec<(String, String)>,
}

/// `a : b :: c : d` quadruples.
#[derive(Debug, Clone)]
pub struct AnalogyDataset {
    pub name: String,
    pub rows: Vec<[String; 4]>,
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".to_owned())
}

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::DatasetParse {
        path: path.to_owned(),
        line,
        reason: reason.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

impl SimilarityDataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut pairs = Vec::new();
        for (lineno, line) in content_lines(&text) {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse_err(path, lineno, "expected word1<TAB>word2<TAB>score"));
            }
            let score: f64 = fields[2]
                .trim()
                .parse()
                .map_err(|_| parse_err(path, lineno, "score is not a number"))?;
            pairs.push(SimilarityPair {
                word1: fields[0].trim().to_lowercase(),
                word2: fields[1].trim().to_lowercase(),
                score,
            });
        }
        Self::from_pairs(dataset_name(path), pairs).map_err(|e| match e {
            Error::InvalidConfig(msg) => parse_err(path, 0, msg),
            other => other,
        })
    }

    pub fn from_pairs(name: impl Into<String>, pairs: Vec<SimilarityPair>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for p in &pairs {
            if !p.score.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "non-finite score for pair ({}, {})",
                    p.word1, p.word2
                )));
            }
            let key = if p.word1 <= p.word2 {
                (p.word1.clone(), p.word2.clone())
            } else {
                (p.word2.clone(), p.word1.clone())
            };
            if !seen.insert(key) {
                return Err(Error::InvalidConfig(format!(
                    "duplicate pair ({}, {})",
                    p.word1, p.word2
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            pairs,
        })
    }
}

impl CategorizationDataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut rows = Vec::new();
        for (lineno, line) in content_lines(&text) {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 2 {
                return Err(parse_err(path, lineno, "expected word<TAB>category"));
            }
            rows.push((fields[0].trim().to_lowercase(), fields[1].trim().to_lowercase()));
        }
        Self::from_rows(dataset_name(path), rows).map_err(|e| match e {
            Error::InvalidConfig(msg) => parse_err(path, 0, msg),
            other => other,
        })
    }

    pub fn from_rows(name: impl Into<String>, rows: Vec<(String, String)>) -> Result<Self> {
        let mut words = std::collections::HashSet::new();
        let mut categories = std::collections::HashSet::new();
        for (word, category) in &rows {
            if !words.insert(word.clone()) {
                return Err(Error::InvalidConfig(format!("word {word} appears twice")));
            }
            categories.insert(category.clone());
        }
        if categories.len() < 2 {
            return Err(Error::InvalidConfig(
                "categorization dataset needs at least 2 categories".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            rows,
        })
    }

    /// Distinct category count (the k of the purity clustering).
    pub fn n_categories(&self) -> usize {
        self.rows
            .iter()
            .map(|(_, c)| c.as_str())
            .collect::<std::collections::HashSet<_>>()
            .len()
    }
}

impl AnalogyDataset {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut rows = Vec::new();
        for (lineno, line) in content_lines(&text) {
            let fields: Vec<String> =
                line.split_whitespace().map(|w| w.to_lowercase()).collect();
            if fields.len() != 4 {
                return Err(parse_err(path, lineno, "expected 4 space-separated words"));
            }
            let [a, b, c, d] = [
                fields[0].clone(),
                fields[1].clone(),
                fields[2].clone(),
                fields[3].clone(),
            ];
            rows.push([a, b, c, d]);
        }
        Self::from_rows(dataset_name(path), rows)
    }

    pub fn from_rows(name: impl Into<String>, rows: Vec<[String; 4]>) -> Result<Self> {
        for row in &rows {
            if row.iter().any(|w| w.is_empty()) {
                return Err(Error::InvalidConfig("empty word in analogy row".into()));
            }
        }
        Ok(Self {
            name: name.into(),
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f.flush().unwrap();
        f
    }

    #[test]
    fn loads_similarity_tsv_with_comments() {
        let f = write_file("# comment\nCar\tTruck\t8.5\nsky\tground\t1.0\n");
        let ds = SimilarityDataset::load(f.path()).unwrap();
        assert_eq!(ds.pairs.len(), 2);
        assert_eq!(ds.pairs[0].word1, "car");
        assert_eq!(ds.pairs[0].score, 8.5);
    }

    #[test]
    fn rejects_duplicate_unordered_pairs() {
        let f = write_file("a\tb\t1.0\nb\ta\t2.0\n");
        assert!(SimilarityDataset::load(f.path()).is_err());
    }

    #[test]
    fn loads_categorization_tsv() {
        let f = write_file("dog\tanimal\ncat\tanimal\noak\ttree\n");
        let ds = CategorizationDataset::load(f.path()).unwrap();
        assert_eq!(ds.rows.len(), 3);
        assert_eq!(ds.n_categories(), 2);
    }

    #[test]
    fn rejects_single_category() {
        let f = write_file("dog\tanimal\ncat\tanimal\n");
        assert!(CategorizationDataset::load(f.path()).is_err());
    }

    #[test]
    fn rejects_repeated_word() {
        let f = write_file("dog\tanimal\ndog\ttree\n");
        assert!(CategorizationDataset::load(f.path()).is_err());
    }

    #[test]
    fn loads_analogy_quadruples() {
        let f = write_file("king queen man woman\n# skip\nparis france rome italy\n");
        let ds = AnalogyDataset::load(f.path()).unwrap();
        assert_eq!(ds.rows.len(), 2);
        assert_eq!(ds.rows[0][3], "woman");
    }

    #[test]
    fn rejects_malformed_analogy_line() {
        let f = write_file("just three words\n");
        assert!(AnalogyDataset::load(f.path()).is_err());
    }
}
