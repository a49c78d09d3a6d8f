//! Character n-gram models over word-internal letter sequences.
//!
//! Each word is padded on the left with n−1 copies of the start sentinel
//! `^`, and every letter is predicted from the n−1 characters before it by
//! maximum likelihood. Only real letters are predicted — the end sentinel
//! `$` is reserved so it can never be confused with text, but no transition
//! into it is modeled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{SENTINEL_END, SENTINEL_START};
use crate::corpus::Sentence;
use crate::error::{Error, Result};

/// Conditional letter probabilities keyed by their n−1 character context.
#[derive(Debug, Clone, PartialEq)]
pub struct CharNGramModel {
    order: usize,
    table: BTreeMap<String, BTreeMap<char, f64>>,
}

impl CharNGramModel {
    /// The n in n-gram (2 or 3).
    pub fn order(&self) -> usize {
        self.order
    }

    /// P(symbol | context), zero for unseen pairs.
    pub fn prob(&self, context: &str, symbol: char) -> f64 {
        self.table
            .get(context)
            .and_then(|row| row.get(&symbol))
            .copied()
            .unwrap_or(0.0)
    }

    /// All contexts, in sorted order.
    pub fn contexts(&self) -> impl Iterator<Item = &str> {
        self.table.keys().map(String::as_str)
    }

    /// The full distribution for one context.
    pub fn row(&self, context: &str) -> Option<&BTreeMap<char, f64>> {
        self.table.get(context)
    }

    /// Serializes as TSV `context<TAB>symbol<TAB>probability` lines in
    /// (context, symbol) order, nine decimal places.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (context, row) in &self.table {
            for (symbol, prob) in row {
                let _ = writeln!(out, "{context}\t{symbol}\t{prob:.9}");
            }
        }
        out
    }
}

/// Estimates a character n-gram model from a corpus.
///
/// Only orders 2 and 3 are supported; the corpus must contain at least one
/// token, and no token may contain a reserved sentinel character.
pub fn char_ngram_model(corpus: &[Sentence], n: usize) -> Result<CharNGramModel> {
    if n != 2 && n != 3 {
        return Err(Error::BadNgramOrder(n));
    }
    let mut counts: BTreeMap<String, BTreeMap<char, u64>> = BTreeMap::new();
    let mut seen_any = false;
    for sentence in corpus {
        for token in &sentence.tokens {
            for c in token.surface.chars() {
                if c == SENTINEL_START || c == SENTINEL_END {
                    return Err(Error::ReservedSentinel(c));
                }
            }
            seen_any = true;
            let padded: Vec<char> = std::iter::repeat_n(SENTINEL_START, n - 1)
                .chain(token.surface.chars())
                .collect();
            for window in padded.windows(n) {
                let context: String = window[..n - 1].iter().collect();
                let symbol = window[n - 1];
                *counts
                    .entry(context)
                    .or_default()
                    .entry(symbol)
                    .or_insert(0) += 1;
            }
        }
    }
    if !seen_any {
        return Err(Error::NoSymbols);
    }

    let table = counts
        .into_iter()
        .map(|(context, row)| {
            let total: u64 = row.values().sum();
            let probs = row
                .into_iter()
                .map(|(c, k)| (c, k as f64 / total as f64))
                .collect();
            (context, probs)
        })
        .collect();
    Ok(CharNGramModel { order: n, table })
}
