//! Word n-gram TF-IDF featurization.
//!
//! Pinned behavior, chosen for reproducibility:
//! - tokens are lowercased maximal runs of alphanumeric characters of length
//!   at least `min_token_len` (default 2); everything else splits
//! - n-grams are contiguous token windows for each n in `ngram_range`,
//!   joined with single spaces
//! - `idf[t] = ln((1 + n_docs) / (1 + df(t))) + 1`
//! - `max_features` keeps the n-grams with the highest total corpus counts,
//!   count ties broken toward the lexicographically smaller n-gram
//! - transform multiplies raw in-document counts by idf and L2-normalizes;
//!   an all-zero vector (fully out-of-vocabulary text) stays zero

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::data::FeatureVector;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfidfConfig {
    /// Inclusive (lo, hi) n-gram sizes, `1 <= lo <= hi <= 2`.
    pub ngram_range: (usize, usize),
    #[serde(default)]
    pub max_features: Option<usize>,
    #[serde(default = "default_min_token_len")]
    pub min_token_len: usize,
}

fn default_min_token_len() -> usize {
    2
}

impl Default for TfidfConfig {
    fn default() -> Self {
        TfidfConfig {
            ngram_range: (1, 2),
            max_features: None,
            min_token_len: 2,
        }
    }
}

/// A fitted vocabulary with idf weights.
#[derive(Debug, Clone)]
pub struct TfidfModel {
    vocabulary: HashMap<String, usize>,
    idf: Vec<f64>,
    config: TfidfConfig,
}

impl TfidfModel {
    pub fn vocabulary_len(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn feature_index(&self, ngram: &str) -> Option<usize> {
        self.vocabulary.get(ngram).copied()
    }

    pub fn idf(&self, index: usize) -> f64 {
        self.idf[index]
    }
}

fn tokenize(text: &str, min_token_len: usize) -> Vec<String> {
    let lower = text.to_lowercase();
    lower
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= min_token_len)
        .map(str::to_string)
        .collect()
}

fn ngrams(tokens: &[String], range: (usize, usize)) -> Vec<String> {
    let mut out = Vec::new();
    for n in range.0..=range.1 {
        if n == 0 || n > tokens.len() {
            continue;
        }
        for window in tokens.windows(n) {
            out.push(window.join(" "));
        }
    }
    out
}

/// Builds the vocabulary and idf weights from a corpus.
pub fn fit_tfidf(corpus: &[String], config: &TfidfConfig) -> Result<TfidfModel> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let (lo, hi) = config.ngram_range;
    if lo == 0 || lo > hi || hi > 2 {
        return Err(Error::InvalidConfig(format!(
            "ngram_range must satisfy 1 <= lo <= hi <= 2, got ({lo}, {hi})"
        )));
    }

    // total counts and document frequencies
    let mut counts: HashMap<String, (u64, u64)> = HashMap::new(); // (total, df)
    for doc in corpus {
        let tokens = tokenize(doc, config.min_token_len);
        let grams = ngrams(&tokens, config.ngram_range);
        let mut seen: HashMap<&str, ()> = HashMap::new();
        for g in &grams {
            let entry = counts.entry(g.clone()).or_insert((0, 0));
            entry.0 += 1;
            if seen.insert(g.as_str(), ()).is_none() {
                entry.1 += 1;
            }
        }
    }

    let mut terms: Vec<(String, u64, u64)> = counts
        .into_iter()
        .map(|(g, (total, df))| (g, total, df))
        .collect();
    if let Some(limit) = config.max_features {
        // highest total count first, ties toward the smaller string
        terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        terms.truncate(limit);
    }
    // column order is lexicographic for determinism
    terms.sort_by(|a, b| a.0.cmp(&b.0));

    let n_docs = corpus.len() as f64;
    let mut vocabulary = HashMap::with_capacity(terms.len());
    let mut idf = Vec::with_capacity(terms.len());
    for (i, (gram, _, df)) in terms.into_iter().enumerate() {
        vocabulary.insert(gram, i);
        idf.push(((1.0 + n_docs) / (1.0 + df as f64)).ln() + 1.0);
    }

    Ok(TfidfModel {
        vocabulary,
        idf,
        config: config.clone(),
    })
}

/// Featurizes one document: raw counts times idf, L2-normalized. Unknown
/// n-grams are ignored; fully out-of-vocabulary text gives the zero vector.
pub fn transform_tfidf(model: &TfidfModel, text: &str) -> FeatureVector {
    let dim = model.vocabulary.len().max(1);
    let tokens = tokenize(text, model.config.min_token_len);
    let mut counts: HashMap<usize, f64> = HashMap::new();
    for gram in ngrams(&tokens, model.config.ngram_range) {
        if let Some(&col) = model.vocabulary.get(&gram) {
            *counts.entry(col).or_insert(0.0) += 1.0;
        }
    }
    let mut entries: Vec<(u32, f64)> = counts
        .into_iter()
        .map(|(col, count)| (col as u32, count * model.idf[col]))
        .collect();
    entries.sort_unstable_by_key(|e| e.0);

    let norm = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, v) in entries.iter_mut() {
            *v /= norm;
        }
    }
    FeatureVector::sparse(dim, entries).expect("indices are distinct and in range")
}
