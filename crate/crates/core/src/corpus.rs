//! Corpus handling: tokenization, word counting, and vocabulary capping.
//!
//! Text is split into sentences at terminal punctuation (`.`, `!`, `?`) and
//! into tokens at whitespace and punctuation. Tokens are uppercased with
//! diacritics preserved: `ČOVJEK` and `čovjek` are the same word, `Č` never
//! degrades to `C`. An optional inline markup (`word/SUBJ`, `word/PRED`,
//! `word/OBJ`) attaches a syntactic role to a token; the marker itself never
//! becomes a token.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Syntactic role a token can be annotated with in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Role {
    Subj,
    Pred,
    Obj,
}

impl Role {
    /// Parses an inline role marker, case-insensitively.
    pub fn parse(s: &str) -> Option<Role> {
        match s.to_uppercase().as_str() {
            "SUBJ" => Some(Role::Subj),
            "PRED" => Some(Role::Pred),
            "OBJ" => Some(Role::Obj),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Role::Subj => "SUBJ",
            Role::Pred => "PRED",
            Role::Obj => "OBJ",
        }
    }
}

/// A single uppercased word together with its position in the sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

/// An ordered run of tokens with optional per-token role annotations.
///
/// `annotations` always has the same length as `tokens`; positions are
/// contiguous from zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    pub annotations: Vec<Option<Role>>,
}

impl Sentence {
    /// Builds a sentence from bare words, assigning positions and leaving
    /// every role annotation empty.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Sentence {
        Sentence::from_annotated(
            &words
                .iter()
                .map(|w| (w.as_ref().to_string(), None))
                .collect::<Vec<_>>(),
        )
    }

    /// Builds a sentence from `(word, role)` pairs.
    pub fn from_annotated(words: &[(String, Option<Role>)]) -> Sentence {
        let tokens = words
            .iter()
            .enumerate()
            .map(|(position, (surface, _))| Token {
                surface: surface.clone(),
                position,
            })
            .collect();
        let annotations = words.iter().map(|(_, role)| *role).collect();
        Sentence {
            tokens,
            annotations,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// The role attached to the token at `position`, if any.
    pub fn role(&self, position: usize) -> Option<Role> {
        self.annotations.get(position).copied().flatten()
    }

    /// Token surfaces in order, handy for assertions and display.
    pub fn surfaces(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.surface.as_str()).collect()
    }
}

/// Splits raw text into sentences of uppercased tokens.
///
/// Sentence boundaries are `.`, `!` and `?`; any other punctuation merely
/// separates tokens. Empty sentences are dropped, so text without terminal
/// punctuation still yields its trailing sentence and `tokenize("")` yields
/// nothing.
pub fn tokenize(text: &str) -> Vec<Sentence> {
    let mut sentences = Vec::new();
    let mut current: Vec<(String, Option<Role>)> = Vec::new();
    let mut word = String::new();

    // Local helpers keep the scanner readable.
    fn flush_word(word: &mut String, current: &mut Vec<(String, Option<Role>)>) {
        if !word.is_empty() {
            let upper: String = word.chars().flat_map(char::to_uppercase).collect();
            current.push((upper, None));
            word.clear();
        }
    }
    fn flush_sentence(current: &mut Vec<(String, Option<Role>)>, sentences: &mut Vec<Sentence>) {
        if !current.is_empty() {
            sentences.push(Sentence::from_annotated(current));
            current.clear();
        }
    }

    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_alphanumeric() {
            word.push(c);
            i += 1;
        } else if c == '/' && !word.is_empty() {
            // Possible role marker: a letter run right after the slash.
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_alphanumeric() {
                end += 1;
            }
            let marker: String = chars[start..end].iter().collect();
            if let Some(role) = Role::parse(&marker) {
                let upper: String = word.chars().flat_map(char::to_uppercase).collect();
                current.push((upper, Some(role)));
                word.clear();
                i = end;
            } else {
                // Not a role: the slash is ordinary punctuation.
                flush_word(&mut word, &mut current);
                i += 1;
            }
        } else if matches!(c, '.' | '!' | '?') {
            flush_word(&mut word, &mut current);
            flush_sentence(&mut current, &mut sentences);
            i += 1;
        } else {
            // Whitespace or other punctuation: token separator.
            flush_word(&mut word, &mut current);
            i += 1;
        }
    }
    flush_word(&mut word, &mut current);
    flush_sentence(&mut current, &mut sentences);
    sentences
}

/// Word counts over a corpus, with the running total cached.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<String, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn new() -> FrequencyTable {
        FrequencyTable::default()
    }

    pub fn add(&mut self, word: &str, count: u64) {
        *self.counts.entry(word.to_string()).or_insert(0) += count;
        self.total += count;
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// Total of all counts (token count, not type count).
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct words.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Entries in word order (deterministic, unranked).
    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(w, &c)| (w.as_str(), c))
    }

    /// Entries ranked by descending count, ties broken lexicographically.
    /// This is the canonical order used by truncation and serialization.
    pub fn ranked(&self) -> Vec<(&str, u64)> {
        let mut entries: Vec<(&str, u64)> = self.iter().collect();
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        entries
    }

    /// Serializes as TSV, one `word<TAB>count` line per entry, ranked.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (word, count) in self.ranked() {
            let _ = writeln!(out, "{word}\t{count}");
        }
        out
    }

    /// Parses the TSV form written by [`FrequencyTable::to_tsv`].
    pub fn from_tsv(text: &str) -> Result<FrequencyTable> {
        let mut table = FrequencyTable::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (word, count) = line.split_once('\t').ok_or(Error::BadTableLine {
                line: idx + 1,
                reason: "expected word<TAB>count".to_string(),
            })?;
            let count: u64 = count.parse().map_err(|_| Error::BadTableLine {
                line: idx + 1,
                reason: format!("bad count {count:?}"),
            })?;
            table.add(word, count);
        }
        Ok(table)
    }
}

/// Counts every token in the corpus.
pub fn count_words(corpus: &[Sentence]) -> FrequencyTable {
    let mut table = FrequencyTable::new();
    for sentence in corpus {
        for token in &sentence.tokens {
            table.add(&token.surface, 1);
        }
    }
    table
}

/// The active word list, ordered by descending frequency (ties
/// lexicographic) and capped to a fixed size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary directly from an ordered word list.
    /// Callers are trusted to supply a deduplicated list; use
    /// [`truncate_vocabulary`] to derive one from counts.
    pub fn from_words<S: AsRef<str>>(words: &[S]) -> Vocabulary {
        Vocabulary {
            words: words.iter().map(|w| w.as_ref().to_string()).collect(),
        }
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.iter().any(|w| w == word)
    }
}

/// Keeps the `n` highest-ranked words of the frequency table.
///
/// Because the ranking is a total order (count descending, then word), a
/// smaller cap always yields a prefix of a larger one.
pub fn truncate_vocabulary(freq: &FrequencyTable, n: usize) -> Vocabulary {
    let words = freq
        .ranked()
        .into_iter()
        .take(n)
        .map(|(w, _)| w.to_string())
        .collect();
    Vocabulary { words }
}
