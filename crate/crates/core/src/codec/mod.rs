//! Entropy coding over the letter alphabet.
//!
//! The vocabulary is treated as a stream of letters whose distribution is
//! estimated from a corpus. From that distribution we derive the Shannon
//! entropy, a canonical prefix code book (frequent letters get short
//! codewords), a redundant-letter reduction that strips low-information
//! vowels, and character n-gram models for alignment scoring.
//!
//! The characters `^` and `$` are reserved as word-boundary sentinels and
//! are rejected wherever they could collide with real text.

mod huffman;
mod ngram;
mod reduce;

pub use huffman::build_codebook;
pub use ngram::{char_ngram_model, CharNGramModel};
pub use reduce::{reduce_vocabulary, reduce_word, ReducedWord};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::corpus::Sentence;
use crate::error::{Error, Result};

/// Start-of-word sentinel used by the n-gram models.
pub const SENTINEL_START: char = '^';
/// End-of-word sentinel, reserved alongside [`SENTINEL_START`].
pub const SENTINEL_END: char = '$';

/// Tolerance used when checking that probabilities sum to one.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

/// A probability distribution over single letters.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDistribution {
    probs: BTreeMap<char, f64>,
}

impl SymbolDistribution {
    /// Validates and wraps a probability table. All probabilities must be
    /// non-negative and sum to 1 within [`PROBABILITY_TOLERANCE`].
    pub fn new(probs: BTreeMap<char, f64>) -> Result<SymbolDistribution> {
        let sum: f64 = probs.values().sum();
        if (sum - 1.0).abs() > PROBABILITY_TOLERANCE || probs.values().any(|&p| p < 0.0) {
            return Err(Error::BadDistribution {
                sum,
                tolerance: PROBABILITY_TOLERANCE,
            });
        }
        Ok(SymbolDistribution { probs })
    }

    /// Builds a distribution from raw counts.
    pub fn from_counts(counts: &BTreeMap<char, u64>) -> Result<SymbolDistribution> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::NoSymbols);
        }
        let probs = counts
            .iter()
            .map(|(&c, &n)| (c, n as f64 / total as f64))
            .collect();
        Ok(SymbolDistribution { probs })
    }

    /// The probability of `symbol`, zero if absent.
    pub fn prob(&self, symbol: char) -> f64 {
        self.probs.get(&symbol).copied().unwrap_or(0.0)
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.probs.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, f64)> + '_ {
        self.probs.iter().map(|(&c, &p)| (c, p))
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Serializes as TSV, one `symbol<TAB>probability` line per symbol in
    /// symbol order, probabilities printed with nine decimal places.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (symbol, prob) in self.iter() {
            let _ = writeln!(out, "{symbol}\t{prob:.9}");
        }
        out
    }

    /// Parses the TSV form written by [`SymbolDistribution::to_tsv`].
    pub fn from_tsv(text: &str) -> Result<SymbolDistribution> {
        let mut probs = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::BadTableLine {
                line: idx + 1,
                reason,
            };
            let (symbol, prob) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected symbol<TAB>probability".to_string()))?;
            let mut chars = symbol.chars();
            let symbol = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(bad(format!("bad symbol {symbol:?}"))),
            };
            let prob: f64 = prob
                .parse()
                .map_err(|_| bad(format!("bad probability {prob:?}")))?;
            probs.insert(symbol, prob);
        }
        SymbolDistribution::new(probs)
    }
}

/// Estimates the letter distribution of a corpus by direct counting.
///
/// Every character of every token contributes one observation. An empty
/// corpus has no distribution and is an error.
pub fn letter_frequencies(corpus: &[Sentence]) -> Result<SymbolDistribution> {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    for sentence in corpus {
        for token in &sentence.tokens {
            for c in token.surface.chars() {
                *counts.entry(c).or_insert(0) += 1;
            }
        }
    }
    SymbolDistribution::from_counts(&counts)
}

/// Shannon entropy of the distribution in bits per symbol.
///
/// Zero-probability symbols contribute nothing (the p·log p term vanishes
/// in the limit), so a deterministic alphabet has entropy 0.
pub fn entropy(dist: &SymbolDistribution) -> f64 {
    dist.iter()
        .filter(|&(_, p)| p > 0.0)
        .map(|(_, p)| -p * p.log2())
        .sum()
}

/// A prefix-free assignment of bitstrings to symbols.
///
/// Built via [`build_codebook`]; the constructor revalidates prefix-freeness
/// so a code book loaded from disk carries the same guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeBook {
    codes: BTreeMap<char, String>,
    reverse: BTreeMap<String, char>,
}

impl CodeBook {
    /// Wraps a code table, checking that every codeword is a non-empty
    /// bitstring and that no codeword is a prefix of another.
    pub fn from_codes(codes: BTreeMap<char, String>) -> Result<CodeBook> {
        let mut reverse = BTreeMap::new();
        for (&symbol, code) in &codes {
            if code.is_empty() {
                return Err(Error::TrailingBits(String::new()));
            }
            if let Some(bad) = code.chars().find(|&c| c != '0' && c != '1') {
                return Err(Error::InvalidBit(bad));
            }
            reverse.insert(code.clone(), symbol);
        }
        // In a prefix-free set, sorted order puts any prefix immediately
        // before a word it prefixes.
        let words: Vec<&String> = reverse.keys().collect();
        for pair in words.windows(2) {
            if pair[1].starts_with(pair[0].as_str()) {
                return Err(Error::TrailingBits(pair[0].to_string()));
            }
        }
        Ok(CodeBook { codes, reverse })
    }

    /// The codeword for `symbol`, if covered.
    pub fn code(&self, symbol: char) -> Option<&str> {
        self.codes.get(&symbol).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, &str)> + '_ {
        self.codes.iter().map(|(&c, code)| (c, code.as_str()))
    }

    /// Expected codeword length in bits under `dist`.
    pub fn expected_length(&self, dist: &SymbolDistribution) -> f64 {
        dist.iter()
            .map(|(c, p)| p * self.code(c).map_or(0, str::len) as f64)
            .sum()
    }

    /// Serializes as TSV, one `symbol<TAB>bitstring` line in symbol order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (symbol, code) in self.iter() {
            let _ = writeln!(out, "{symbol}\t{code}");
        }
        out
    }

    /// Parses the TSV form written by [`CodeBook::to_tsv`].
    pub fn from_tsv(text: &str) -> Result<CodeBook> {
        let mut codes = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let bad = |reason: String| Error::BadTableLine {
                line: idx + 1,
                reason,
            };
            let (symbol, code) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected symbol<TAB>bitstring".to_string()))?;
            let mut chars = symbol.chars();
            let symbol = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(bad(format!("bad symbol {symbol:?}"))),
            };
            codes.insert(symbol, code.to_string());
        }
        CodeBook::from_codes(codes)
    }
}

/// Encodes a word as the concatenation of its letters' codewords.
pub fn encode(word: &str, codebook: &CodeBook) -> Result<String> {
    let mut bits = String::new();
    for c in word.chars() {
        bits.push_str(codebook.code(c).ok_or(Error::UnknownSymbol(c))?);
    }
    Ok(bits)
}

/// Decodes a bitstring back into letters.
///
/// Because the code is prefix-free, scanning left to right and emitting a
/// symbol at the first codeword match is unambiguous. Leftover bits that
/// match no codeword are an error, as is any non-bit character.
pub fn decode(bits: &str, codebook: &CodeBook) -> Result<String> {
    let mut word = String::new();
    let mut pending = String::new();
    for bit in bits.chars() {
        if bit != '0' && bit != '1' {
            return Err(Error::InvalidBit(bit));
        }
        pending.push(bit);
        if let Some(&symbol) = codebook.reverse.get(&pending) {
            word.push(symbol);
            pending.clear();
        }
    }
    if !pending.is_empty() {
        return Err(Error::TrailingBits(pending));
    }
    Ok(word)
}
