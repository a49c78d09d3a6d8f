//! Redundant-letter elimination.
//!
//! Vowels carry little information in this language family, so words can
//! shed them and stay recognizable — as long as no two vocabulary words
//! collapse into the same shape. Reduction deletes vowels greedily, most
//! probable (least informative) first, and stops a word's reduction cold
//! the moment the next deletion would collide with another word's form.
//! Consonants are never deleted, which also keeps vowel-less words intact.

use std::collections::BTreeSet;

use super::SymbolDistribution;
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};

/// Letters eligible for deletion.
const VOWELS: [char; 5] = ['A', 'E', 'I', 'O', 'U'];

/// A vocabulary word together with its reduced spelling.
///
/// The reduced form is always a non-empty subsequence of the original, and
/// over one vocabulary the map original → reduced is injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedWord {
    pub original: String,
    pub reduced: String,
}

fn is_vowel(c: char) -> bool {
    VOWELS.contains(&c)
}

/// Reduces every word of the vocabulary, in vocabulary order.
///
/// Words are processed in their ranked order, and every original spelling
/// is reserved up front, so a reduction can never land on another word —
/// neither on a form some earlier word reduced to, nor on a spelling a
/// later word starts from. That is what makes the whole map injective.
pub fn reduce_vocabulary(vocab: &Vocabulary, dist: &SymbolDistribution) -> Vec<ReducedWord> {
    let mut taken: BTreeSet<String> = vocab.words().iter().cloned().collect();
    let mut out = Vec::with_capacity(vocab.len());
    for word in vocab.words() {
        let reduced = reduce_one(word, dist, &taken);
        taken.insert(reduced.clone());
        out.push(ReducedWord {
            original: word.clone(),
            reduced,
        });
    }
    out
}

/// Reduces a single vocabulary word.
///
/// The result is the same entry [`reduce_vocabulary`] produces for `word`;
/// asking about a word outside the vocabulary is an error.
pub fn reduce_word(
    word: &str,
    vocab: &Vocabulary,
    dist: &SymbolDistribution,
) -> Result<ReducedWord> {
    reduce_vocabulary(vocab, dist)
        .into_iter()
        .find(|r| r.original == word)
        .ok_or_else(|| Error::NotInVocabulary(word.to_string()))
}

/// Greedy deletion loop for one word against the currently reserved forms.
fn reduce_one(word: &str, dist: &SymbolDistribution, taken: &BTreeSet<String>) -> String {
    let mut current: Vec<char> = word.chars().collect();
    loop {
        // Most probable vowel still present; ties fall to the earlier
        // letter of the alphabet.
        let candidate = current
            .iter()
            .copied()
            .filter(|&c| is_vowel(c))
            .max_by(|a, b| {
                dist.prob(*a)
                    .total_cmp(&dist.prob(*b))
                    .then_with(|| b.cmp(a))
            });
        let Some(vowel) = candidate else {
            break;
        };
        if current.len() == 1 {
            break; // a word never reduces to nothing
        }
        // Delete the last occurrence: word-initial letters are the most
        // recognizable, so they go last.
        let at = current.iter().rposition(|&c| c == vowel).unwrap();
        let mut next = current.clone();
        next.remove(at);
        let next_str: String = next.iter().collect();
        if taken.contains(&next_str) {
            break; // stop before the collision
        }
        current = next;
    }
    current.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    /// Uniform distribution over the letters that actually occur.
    fn uniform_dist(words: &[&str]) -> SymbolDistribution {
        let letters: BTreeSet<char> = words.iter().flat_map(|w| w.chars()).collect();
        let p = 1.0 / letters.len() as f64;
        let probs: BTreeMap<char, f64> = letters.into_iter().map(|c| (c, p)).collect();
        SymbolDistribution::new(probs).unwrap()
    }

    fn reduced_map(words: &[&str]) -> Vec<(String, String)> {
        let vocab = Vocabulary::from_words(words);
        let dist = uniform_dist(words);
        reduce_vocabulary(&vocab, &dist)
            .into_iter()
            .map(|r| (r.original, r.reduced))
            .collect()
    }

    #[test]
    fn lone_word_loses_all_vowels() {
        let map = reduced_map(&["ČOVJEK"]);
        assert_eq!(map[0].1, "ČVJK");
    }

    #[test]
    fn collision_stops_the_later_word() {
        // Whichever of LUK/LIK reduces first claims LK; the other stops
        // before colliding and keeps its vowel.
        let map = reduced_map(&["LUK", "LIK"]);
        let forms: BTreeSet<&str> = map.iter().map(|(_, r)| r.as_str()).collect();
        assert_eq!(map[0].1, "LK");
        assert_eq!(map[1].1, "LIK");
        assert_eq!(forms.len(), 2);
    }

    #[test]
    fn vowelless_word_is_untouched() {
        let map = reduced_map(&["BBB"]);
        assert_eq!(map[0].1, "BBB");
    }

    #[test]
    fn all_vowel_word_keeps_its_last_letter() {
        let map = reduced_map(&["AE"]);
        assert_eq!(map[0].1.chars().count(), 1);
    }

    #[test]
    fn reduction_never_lands_on_another_original() {
        // ČVJK is itself a vocabulary word, so ČOVJEK must stop early.
        let map = reduced_map(&["ČVJK", "ČOVJEK"]);
        let forms: BTreeSet<&String> = map.iter().map(|(_, r)| r).collect();
        assert_eq!(forms.len(), 2);
    }

    #[test]
    fn reduced_is_always_a_subsequence() {
        fn is_subsequence(needle: &str, hay: &str) -> bool {
            let mut it = hay.chars();
            needle.chars().all(|c| it.by_ref().any(|h| h == c))
        }
        let words = ["ČOVJEK", "ČOVJEKA", "LULA", "LULU", "DIM", "DUHAN"];
        for (orig, red) in reduced_map(&words) {
            assert!(is_subsequence(&red, &orig), "{red} not within {orig}");
            assert!(!red.is_empty());
        }
    }

    #[test]
    fn higher_probability_vowels_go_first() {
        // O is far more probable than E, so it is deleted first; with only
        // one deletion possible before a collision, O is the one missing.
        let probs: BTreeMap<char, f64> = [
            ('Č', 0.1),
            ('V', 0.1),
            ('J', 0.1),
            ('K', 0.1),
            ('O', 0.5),
            ('E', 0.1),
        ]
        .into_iter()
        .collect();
        let dist = SymbolDistribution::new(probs).unwrap();
        let vocab = Vocabulary::from_words(&["ČOVJEK", "ČVJEK"]);
        let out = reduce_vocabulary(&vocab, &dist);
        // ČOVJEK deletes O first, landing on the reserved ČVJEK → stops.
        assert_eq!(out[0].reduced, "ČOVJEK");
        assert_eq!(out[1].reduced, "ČVJK");
    }

    #[test]
    fn unknown_word_is_rejected() {
        let vocab = Vocabulary::from_words(&["LUK"]);
        let dist = uniform_dist(&["LUK"]);
        assert!(matches!(
            reduce_word("LIK", &vocab, &dist),
            Err(Error::NotInVocabulary(_))
        ));
    }

    #[test]
    fn reduce_word_matches_bulk_reduction() {
        let words = ["LUK", "LIK", "LULA"];
        let vocab = Vocabulary::from_words(&words);
        let dist = uniform_dist(&words);
        let bulk = reduce_vocabulary(&vocab, &dist);
        for entry in &bulk {
            let single = reduce_word(&entry.original, &vocab, &dist).unwrap();
            assert_eq!(&single, entry);
        }
    }
}
