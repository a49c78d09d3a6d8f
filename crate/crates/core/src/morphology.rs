//! Morphology: the inverse dictionary, suffix induction, and lemmatization.
//!
//! Sorting the vocabulary by reversed spelling (a tergo) lines up every
//! inflected form that shares an ending, which is what makes suffixes
//! countable in the first place: all words ending in `-OM` form one
//! contiguous block. Suffix rules are induced from those blocks, or loaded
//! from a hand-written table when induction is too blunt. Lemmatization
//! strips the longest applicable suffix and appends the stem marker `-`;
//! irregular forms (consonant voice changes and the like) bypass the rules
//! entirely through an exception table.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

/// Default upper bound on induced suffix length; long enough for every
/// ending in the nominal paradigms this pipeline handles.
pub const MAX_SUFFIX_LEN: usize = 5;

/// Marker appended to stems to distinguish lemmas from surface forms.
pub const STEM_MARKER: char = '-';

/// The vocabulary sorted by reversed spelling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseDictionary {
    words: Vec<String>,
}

/// Compares two words by their reversed character sequences.
fn atergo_cmp(a: &str, b: &str) -> Ordering {
    a.chars().rev().cmp(b.chars().rev())
}

impl InverseDictionary {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Serializes as plain text, one word per line, in a-tergo order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for word in &self.words {
            let _ = writeln!(out, "{word}");
        }
        out
    }

    /// Parses the plain-text form, insisting on a-tergo order and no
    /// duplicates so a hand-edited file cannot silently break lookups.
    pub fn from_text(text: &str) -> Result<InverseDictionary> {
        let words: Vec<String> = text
            .lines()
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
        for (idx, pair) in words.windows(2).enumerate() {
            match atergo_cmp(&pair[0], &pair[1]) {
                Ordering::Greater => {
                    return Err(Error::BadTableLine {
                        line: idx + 2,
                        reason: format!("{:?} out of a-tergo order", pair[1]),
                    })
                }
                Ordering::Equal => {
                    return Err(Error::BadTableLine {
                        line: idx + 2,
                        reason: format!("duplicate word {:?}", pair[1]),
                    })
                }
                Ordering::Less => {}
            }
        }
        Ok(InverseDictionary { words })
    }
}

/// Sorts the vocabulary by reversed spelling, dropping duplicates.
pub fn build_inverse_dictionary(vocab: &Vocabulary) -> InverseDictionary {
    let mut words: Vec<String> = vocab.words().to_vec();
    words.sort_by(|a, b| atergo_cmp(a, b));
    words.dedup();
    InverseDictionary { words }
}

/// An induced or hand-written suffix together with its evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub suffix: String,
    /// Number of dictionary words ending in the suffix.
    pub support: usize,
}

/// Collects every suffix of length 1..=`max_len` shared by at least
/// `min_support` dictionary entries.
///
/// A suffix must be strictly shorter than the word it is taken from, so
/// stripping it always leaves a non-empty stem. Rules are ordered longest
/// first, then by descending support, then alphabetically.
pub fn induce_suffixes_up_to(
    dict: &InverseDictionary,
    min_support: usize,
    max_len: usize,
) -> Result<Vec<SuffixRule>> {
    if min_support == 0 {
        return Err(Error::BadMinSupport(min_support));
    }
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for word in dict.words() {
        let chars: Vec<char> = word.chars().collect();
        for len in 1..=max_len.min(chars.len().saturating_sub(1)) {
            let suffix: String = chars[chars.len() - len..].iter().collect();
            *counts.entry(suffix).or_insert(0) += 1;
        }
    }
    let mut rules: Vec<SuffixRule> = counts
        .into_iter()
        .filter(|&(_, support)| support >= min_support)
        .map(|(suffix, support)| SuffixRule { suffix, support })
        .collect();
    rules.sort_by(|a, b| {
        b.suffix
            .chars()
            .count()
            .cmp(&a.suffix.chars().count())
            .then_with(|| b.support.cmp(&a.support))
            .then_with(|| a.suffix.cmp(&b.suffix))
    });
    Ok(rules)
}

/// [`induce_suffixes_up_to`] with the default length bound.
pub fn induce_suffixes(dict: &InverseDictionary, min_support: usize) -> Result<Vec<SuffixRule>> {
    induce_suffixes_up_to(dict, min_support, MAX_SUFFIX_LEN)
}

/// Serializes rules as TSV `suffix<TAB>support` lines in rule order.
pub fn suffix_rules_to_tsv(rules: &[SuffixRule]) -> String {
    let mut out = String::new();
    for rule in rules {
        let _ = writeln!(out, "{}\t{}", rule.suffix, rule.support);
    }
    out
}

/// Parses the TSV form written by [`suffix_rules_to_tsv`].
pub fn suffix_rules_from_tsv(text: &str) -> Result<Vec<SuffixRule>> {
    let mut rules = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = |reason: String| Error::BadTableLine {
            line: idx + 1,
            reason,
        };
        let (suffix, support) = line
            .split_once('\t')
            .ok_or_else(|| bad("expected suffix<TAB>support".to_string()))?;
        if suffix.is_empty() {
            return Err(bad("empty suffix".to_string()));
        }
        let support: usize = support
            .parse()
            .map_err(|_| bad(format!("bad support {support:?}")))?;
        rules.push(SuffixRule {
            suffix: suffix.to_string(),
            support,
        });
    }
    Ok(rules)
}

/// Exception table and attested paradigms for the lemmatizer.
///
/// Exceptions map an irregular surface form straight to its lemma — the
/// consonant voice change in the Vocative (`ČOVJEČE` → `ČOVJE-`) being the
/// canonical case a suffix rule cannot express. Each exception is checked
/// for plausibility: its stem must be a prefix of the surface form, if
/// need be after undoing the K→Č / G→Ž / H→Š alternation on the stem's
/// final consonant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaTable {
    exceptions: BTreeMap<String, String>,
    paradigms: BTreeMap<String, Vec<String>>,
}

/// Applies the first-palatalization alternation to the stem's final
/// consonant, giving the shape the stem takes before a front vowel.
fn palatalized(stem: &str) -> Option<String> {
    let mut chars: Vec<char> = stem.chars().collect();
    let last = chars.last_mut()?;
    *last = match *last {
        'K' => 'Č',
        'G' => 'Ž',
        'H' => 'Š',
        _ => return None,
    };
    Some(chars.into_iter().collect())
}

impl LemmaTable {
    pub fn new() -> LemmaTable {
        LemmaTable::default()
    }

    /// Registers an irregular surface form. The lemma must carry the stem
    /// marker and its stem must be prefix-compatible with the surface.
    pub fn add_exception(&mut self, surface: &str, lemma: &str) -> Result<()> {
        let stem = lemma.strip_suffix(STEM_MARKER).unwrap_or("");
        let compatible = !stem.is_empty()
            && (surface.starts_with(stem)
                || palatalized(stem).is_some_and(|p| surface.starts_with(&p)));
        if !compatible {
            return Err(Error::BadException {
                surface: surface.to_string(),
                lemma: lemma.to_string(),
            });
        }
        self.exceptions
            .insert(surface.to_string(), lemma.to_string());
        self.paradigms
            .entry(lemma.to_string())
            .or_default()
            .push(surface.to_string());
        Ok(())
    }

    /// Records a regular surface form under its lemma's paradigm.
    pub fn add_paradigm_form(&mut self, lemma: &str, surface: &str) {
        self.paradigms
            .entry(lemma.to_string())
            .or_default()
            .push(surface.to_string());
    }

    pub fn exception(&self, surface: &str) -> Option<&str> {
        self.exceptions.get(surface).map(String::as_str)
    }

    pub fn is_exception(&self, surface: &str) -> bool {
        self.exceptions.contains_key(surface)
    }

    /// Attested surface forms for a lemma, in insertion order.
    pub fn paradigm(&self, lemma: &str) -> &[String] {
        self.paradigms.get(lemma).map_or(&[], Vec::as_slice)
    }

    pub fn exception_count(&self) -> usize {
        self.exceptions.len()
    }

    /// Serializes exceptions as TSV `surface<TAB>lemma` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (surface, lemma) in &self.exceptions {
            let _ = writeln!(out, "{surface}\t{lemma}");
        }
        out
    }

    /// Parses the TSV form written by [`LemmaTable::to_tsv`], validating
    /// every entry.
    pub fn from_tsv(text: &str) -> Result<LemmaTable> {
        let mut table = LemmaTable::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (surface, lemma) = line.split_once('\t').ok_or(Error::BadTableLine {
                line: idx + 1,
                reason: "expected surface<TAB>lemma".to_string(),
            })?;
            table.add_exception(surface, lemma)?;
        }
        Ok(table)
    }
}

/// Reduces a surface form to its marked lemma.
///
/// An exception-table hit wins outright. Otherwise the longest suffix rule
/// that matches (and leaves a non-empty stem) is stripped. A word no rule
/// touches is its own stem. The result always ends in the stem marker.
pub fn lemmatize(word: &str, rules: &[SuffixRule], table: &LemmaTable) -> String {
    if let Some(lemma) = table.exception(word) {
        return lemma.to_string();
    }
    let word_len = word.chars().count();
    let best = rules
        .iter()
        .filter(|r| word.ends_with(r.suffix.as_str()))
        .filter(|r| r.suffix.chars().count() < word_len)
        .max_by_key(|r| r.suffix.chars().count());
    let stem = match best {
        Some(rule) => &word[..word.len() - rule.suffix.len()],
        None => word,
    };
    format!("{stem}{STEM_MARKER}")
}
