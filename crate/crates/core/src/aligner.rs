//! Sentence-pair word alignment by information content.
//!
//! Two statistics drive alignment. Unigram surprisal (−log₂ of a word's
//! smoothed relative frequency) ranks words by how much they stand out;
//! sorting each side by surprisal and pairing rank for rank aligns the
//! distinctive words with each other and leaves the filler unaligned.
//! Bigram surprisal scores each token in its left context; the bigram
//! aligner then seeks the injective pairing that minimizes the total
//! surprisal mismatch — exhaustively for short sentences, greedily past
//! [`EXHAUSTIVE_LIMIT`] tokens. A brute-force reference optimizer with a
//! caller-supplied cost function keeps the exhaustive path honest.
//!
//! Alignments print in the usual `i-j` pair notation, unaligned indices
//! omitted.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::corpus::{FrequencyTable, Sentence};
use crate::error::{Error, Result};

/// Sentence length up to which pairings are searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 8;

/// Start-of-sentence context for the word bigram model.
pub const SENTENCE_START: &str = "<s>";

/// Add-one–smoothed unigram surprisal per word, in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct WordSurprisalTable {
    bits: BTreeMap<String, f64>,
    oov_bits: f64,
}

impl WordSurprisalTable {
    /// Surprisal of `word`; out-of-vocabulary words get the maximal
    /// (zero-count) surprisal.
    pub fn surprisal(&self, word: &str) -> f64 {
        self.bits.get(word).copied().unwrap_or(self.oov_bits)
    }

    pub fn oov_surprisal(&self) -> f64 {
        self.oov_bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// Derives the surprisal table from word counts.
///
/// With add-one smoothing a word seen `c` times out of `t` in a vocabulary
/// of `v` words scores −log₂((c+1)/(t+v)). Every value is finite, and only
/// the degenerate single-word table can reach zero bits.
pub fn build_surprisal_table(freq: &FrequencyTable) -> Result<WordSurprisalTable> {
    if freq.is_empty() {
        return Err(Error::EmptyFrequencyTable);
    }
    let denom = (freq.total() + freq.distinct() as u64) as f64;
    let bits = freq
        .iter()
        .map(|(word, count)| (word.to_string(), -(((count + 1) as f64) / denom).log2()))
        .collect();
    Ok(WordSurprisalTable {
        bits,
        oov_bits: -(1.0 / denom).log2(),
    })
}

/// An injective partial pairing between source and target positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    pairs: Vec<(usize, usize)>,
    src_len: usize,
    tgt_len: usize,
}

impl Alignment {
    /// Normalizes and wraps a pair list. Callers guarantee injectivity;
    /// debug builds verify it.
    pub fn new(mut pairs: Vec<(usize, usize)>, src_len: usize, tgt_len: usize) -> Alignment {
        pairs.sort_unstable();
        debug_assert!(pairs.iter().all(|&(i, j)| i < src_len && j < tgt_len));
        debug_assert!(pairs.iter().map(|&(i, _)| i).all_unique());
        debug_assert!(pairs.iter().map(|&(_, j)| j).all_unique());
        Alignment {
            pairs,
            src_len,
            tgt_len,
        }
    }

    /// Aligned `(source, target)` index pairs, sorted by source index.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn src_len(&self) -> usize {
        self.src_len
    }

    pub fn tgt_len(&self) -> usize {
        self.tgt_len
    }

    pub fn unaligned_src(&self) -> Vec<usize> {
        (0..self.src_len)
            .filter(|i| !self.pairs.iter().any(|&(pi, _)| pi == *i))
            .collect()
    }

    pub fn unaligned_tgt(&self) -> Vec<usize> {
        (0..self.tgt_len)
            .filter(|j| !self.pairs.iter().any(|&(_, pj)| pj == *j))
            .collect()
    }

    /// True when no index appears twice on either side and all indices are
    /// in range — the partial-bijection property.
    pub fn is_partial_bijection(&self) -> bool {
        self.pairs
            .iter()
            .all(|&(i, j)| i < self.src_len && j < self.tgt_len)
            && self.pairs.iter().map(|&(i, _)| i).all_unique()
            && self.pairs.iter().map(|&(_, j)| j).all_unique()
    }

    /// The `i-j` pair notation: space-separated, unaligned indices omitted.
    pub fn pharaoh(&self) -> String {
        self.pairs.iter().map(|(i, j)| format!("{i}-{j}")).join(" ")
    }
}

/// Total cost of an alignment under a pair cost function, summed in pair
/// order. Used to compare optimizers, so the summation order is fixed.
pub fn alignment_cost(alignment: &Alignment, cost: impl Fn(usize, usize) -> f64) -> f64 {
    alignment.pairs().iter().map(|&(i, j)| cost(i, j)).sum()
}

/// Aligns by rank: each side's indices are sorted by descending surprisal
/// (ties by position) and paired rank for rank. The longer side's
/// lowest-ranked leftovers stay unaligned.
pub fn align_by_entropy(
    src: &Sentence,
    tgt: &Sentence,
    src_table: &WordSurprisalTable,
    tgt_table: &WordSurprisalTable,
) -> Alignment {
    fn ranked(sentence: &Sentence, table: &WordSurprisalTable) -> Vec<usize> {
        let mut indices: Vec<usize> = (0..sentence.len()).collect();
        indices.sort_by(|&a, &b| {
            let sa = table.surprisal(&sentence.tokens[a].surface);
            let sb = table.surprisal(&sentence.tokens[b].surface);
            sb.total_cmp(&sa).then_with(|| a.cmp(&b))
        });
        indices
    }
    let src_rank = ranked(src, src_table);
    let tgt_rank = ranked(tgt, tgt_table);
    let pairs = src_rank.into_iter().zip(tgt_rank).collect();
    Alignment::new(pairs, src.len(), tgt.len())
}

/// Word bigram counts with maximum-likelihood conditionals and add-one
/// surprisal for scoring.
#[derive(Debug, Clone, PartialEq)]
pub struct WordBigramModel {
    counts: BTreeMap<String, BTreeMap<String, u64>>,
    vocab_size: usize,
}

impl WordBigramModel {
    /// Counts bigrams over the corpus; each sentence's first token is
    /// conditioned on [`SENTENCE_START`].
    pub fn from_corpus(corpus: &[Sentence]) -> Result<WordBigramModel> {
        let mut counts: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        let mut vocab: std::collections::BTreeSet<&str> = std::collections::BTreeSet::new();
        for sentence in corpus {
            let mut prev = SENTENCE_START;
            for token in &sentence.tokens {
                *counts
                    .entry(prev.to_string())
                    .or_default()
                    .entry(token.surface.clone())
                    .or_insert(0) += 1;
                vocab.insert(&token.surface);
                prev = &token.surface;
            }
        }
        if vocab.is_empty() {
            return Err(Error::NoSymbols);
        }
        Ok(WordBigramModel {
            counts,
            vocab_size: vocab.len(),
        })
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// Maximum-likelihood P(word | prev); zero for unseen pairs.
    pub fn conditional(&self, prev: &str, word: &str) -> f64 {
        let Some(row) = self.counts.get(prev) else {
            return 0.0;
        };
        let total: u64 = row.values().sum();
        row.get(word).copied().unwrap_or(0) as f64 / total as f64
    }

    /// Add-one–smoothed surprisal of `word` after `prev`, in bits. Finite
    /// even for unseen contexts.
    pub fn surprisal(&self, prev: &str, word: &str) -> f64 {
        let (hit, total) = match self.counts.get(prev) {
            Some(row) => (
                row.get(word).copied().unwrap_or(0),
                row.values().sum::<u64>(),
            ),
            None => (0, 0),
        };
        -(((hit + 1) as f64) / ((total as usize + self.vocab_size) as f64)).log2()
    }

    /// The bigram surprisal of every token in its sentence context.
    pub fn token_surprisals(&self, sentence: &Sentence) -> Vec<f64> {
        let mut out = Vec::with_capacity(sentence.len());
        let mut prev = SENTENCE_START;
        for token in &sentence.tokens {
            out.push(self.surprisal(prev, &token.surface));
            prev = &token.surface;
        }
        out
    }
}

/// Aligns by bigram surprisal mismatch: the cost of pairing source token i
/// with target token j is |s_src(i) − s_tgt(j)|, and the pairing covering
/// the shorter side with minimal total cost wins. Up to
/// [`EXHAUSTIVE_LIMIT`] tokens the search is exhaustive (branch and bound);
/// beyond that, cheapest-pair-first greedy. Cost ties break toward the
/// lexicographically smallest pair list, so the result is deterministic.
pub fn align_by_bigrams(
    src: &Sentence,
    tgt: &Sentence,
    src_model: &WordBigramModel,
    tgt_model: &WordBigramModel,
) -> Alignment {
    let s_src = src_model.token_surprisals(src);
    let s_tgt = tgt_model.token_surprisals(tgt);
    let cost = |i: usize, j: usize| (s_src[i] - s_tgt[j]).abs();
    let (m, n) = (src.len(), tgt.len());
    let pairs = if m.min(n) <= EXHAUSTIVE_LIMIT {
        exhaustive_pairs(m, n, &cost)
    } else {
        greedy_pairs(m, n, &cost)
    };
    Alignment::new(pairs, m, n)
}

/// Branch-and-bound search over all injective mappings of the shorter side
/// into the longer one.
fn exhaustive_pairs(m: usize, n: usize, cost: &dyn Fn(usize, usize) -> f64) -> Vec<(usize, usize)> {
    let src_shorter = m <= n;
    let (k, pool) = if src_shorter { (m, n) } else { (n, m) };

    struct Search<'a> {
        cost: &'a dyn Fn(usize, usize) -> f64,
        src_shorter: bool,
        k: usize,
        used: Vec<bool>,
        current: Vec<(usize, usize)>,
        best: Option<(f64, Vec<(usize, usize)>)>,
    }

    impl Search<'_> {
        fn pair_cost(&self, short_idx: usize, pool_idx: usize) -> f64 {
            if self.src_shorter {
                (self.cost)(short_idx, pool_idx)
            } else {
                (self.cost)(pool_idx, short_idx)
            }
        }

        fn descend(&mut self, short_idx: usize, running: f64) {
            if let Some((best_cost, _)) = &self.best {
                if running > *best_cost {
                    return; // costs are non-negative, no way back under
                }
            }
            if short_idx == self.k {
                let mut key = self.current.clone();
                key.sort_unstable();
                let better = match &self.best {
                    None => true,
                    Some((best_cost, best_key)) => {
                        running < *best_cost || (running == *best_cost && key < *best_key)
                    }
                };
                if better {
                    self.best = Some((running, key));
                }
                return;
            }
            for pool_idx in 0..self.used.len() {
                if self.used[pool_idx] {
                    continue;
                }
                self.used[pool_idx] = true;
                let pair = if self.src_shorter {
                    (short_idx, pool_idx)
                } else {
                    (pool_idx, short_idx)
                };
                self.current.push(pair);
                self.descend(short_idx + 1, running + self.pair_cost(short_idx, pool_idx));
                self.current.pop();
                self.used[pool_idx] = false;
            }
        }
    }

    let mut search = Search {
        cost,
        src_shorter,
        k,
        used: vec![false; pool],
        current: Vec::with_capacity(k),
        best: None,
    };
    search.descend(0, 0.0);
    search.best.map(|(_, pairs)| pairs).unwrap_or_default()
}

/// Cheapest-pair-first greedy matching for long sentences.
fn greedy_pairs(m: usize, n: usize, cost: &dyn Fn(usize, usize) -> f64) -> Vec<(usize, usize)> {
    let mut candidates: Vec<(usize, usize)> = (0..m).cartesian_product(0..n).collect();
    candidates.sort_by(|&(i1, j1), &(i2, j2)| {
        cost(i1, j1)
            .total_cmp(&cost(i2, j2))
            .then_with(|| (i1, j1).cmp(&(i2, j2)))
    });
    let mut src_used = vec![false; m];
    let mut tgt_used = vec![false; n];
    let mut pairs = Vec::with_capacity(m.min(n));
    for (i, j) in candidates {
        if pairs.len() == m.min(n) {
            break;
        }
        if !src_used[i] && !tgt_used[j] {
            src_used[i] = true;
            tgt_used[j] = true;
            pairs.push((i, j));
        }
    }
    pairs
}

/// Reference optimizer: enumerates every injective mapping of the shorter
/// side into the longer (no pruning, no shortcuts) and returns the minimum
/// under the caller's cost function, with the same lexicographic
/// tie-breaking as [`align_by_bigrams`]. Refuses pairs whose shorter side
/// exceeds [`EXHAUSTIVE_LIMIT`] tokens.
pub fn brute_force_align(
    src: &Sentence,
    tgt: &Sentence,
    cost: impl Fn(usize, usize) -> f64,
) -> Result<Alignment> {
    let (m, n) = (src.len(), tgt.len());
    let k = m.min(n);
    if k > EXHAUSTIVE_LIMIT {
        return Err(Error::AlignmentTooLong(k, EXHAUSTIVE_LIMIT));
    }
    let src_shorter = m <= n;
    let pool = if src_shorter { n } else { m };

    let mut best: Option<(f64, Vec<(usize, usize)>)> = None;
    for assignment in (0..pool).permutations(k) {
        let pairs: Vec<(usize, usize)> = assignment
            .iter()
            .enumerate()
            .map(|(short_idx, &pool_idx)| {
                if src_shorter {
                    (short_idx, pool_idx)
                } else {
                    (pool_idx, short_idx)
                }
            })
            .collect();
        let total: f64 = pairs.iter().map(|&(i, j)| cost(i, j)).sum();
        let mut key = pairs;
        key.sort_unstable();
        let better = match &best {
            None => true,
            Some((best_cost, best_key)) => {
                total < *best_cost || (total == *best_cost && key < *best_key)
            }
        };
        if better {
            best = Some((total, key));
        }
    }
    let pairs = best.map(|(_, pairs)| pairs).unwrap_or_default();
    Ok(Alignment::new(pairs, m, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{count_words, tokenize, Sentence};

    fn table_of(pairs: &[(&str, u64)]) -> WordSurprisalTable {
        let mut freq = FrequencyTable::new();
        for (w, c) in pairs {
            freq.add(w, *c);
        }
        build_surprisal_table(&freq).unwrap()
    }

    #[test]
    fn surprisal_follows_the_add_one_formula() {
        let table = table_of(&[("A", 3), ("B", 1)]);
        // (3+1)/(4+2) and (1+1)/(4+2)
        assert!((table.surprisal("A") + (4.0f64 / 6.0).log2()).abs() < 1e-12);
        assert!((table.surprisal("B") + (2.0f64 / 6.0).log2()).abs() < 1e-12);
    }

    #[test]
    fn oov_gets_the_maximal_surprisal() {
        let table = table_of(&[("A", 3), ("B", 1)]);
        assert!((table.surprisal("X") + (1.0f64 / 6.0).log2()).abs() < 1e-12);
        assert!(table.surprisal("X") > table.surprisal("B"));
    }

    #[test]
    fn single_word_table_degenerates_to_zero_bits() {
        // (1+1)/(1+1) = 1: the documented boundary case.
        let table = table_of(&[("A", 1)]);
        assert_eq!(table.surprisal("A"), 0.0);
    }

    #[test]
    fn empty_table_is_rejected() {
        assert!(matches!(
            build_surprisal_table(&FrequencyTable::new()),
            Err(Error::EmptyFrequencyTable)
        ));
    }

    #[test]
    fn entropy_alignment_pairs_rank_for_rank() {
        // RIJEČ and WORD are the rare, informative words; JE and IS the
        // filler; THE is so common it ranks last and stays unaligned.
        let src_table = table_of(&[("JE", 50), ("RIJEČ", 2)]);
        let tgt_table = table_of(&[("THE", 80), ("IS", 40), ("WORD", 2)]);
        let src = Sentence::from_words(&["RIJEČ", "JE"]);
        let tgt = Sentence::from_words(&["WORD", "IS", "THE"]);
        let alignment = align_by_entropy(&src, &tgt, &src_table, &tgt_table);
        assert_eq!(alignment.pairs(), [(0, 0), (1, 1)]);
        assert_eq!(alignment.unaligned_tgt(), [2]);
        assert!(alignment.is_partial_bijection());
    }

    #[test]
    fn entropy_alignment_breaks_ties_by_position() {
        let table = table_of(&[("A", 1), ("B", 1)]);
        let src = Sentence::from_words(&["A", "B"]);
        let tgt = Sentence::from_words(&["B", "A"]);
        // Equal surprisal everywhere: ranks fall back to position order.
        let alignment = align_by_entropy(&src, &tgt, &table, &table);
        assert_eq!(alignment.pairs(), [(0, 0), (1, 1)]);
    }

    #[test]
    fn bigram_conditionals_are_maximum_likelihood() {
        let model = WordBigramModel::from_corpus(&tokenize("A B. A C.")).unwrap();
        assert_eq!(model.conditional("A", "B"), 0.5);
        assert_eq!(model.conditional("A", "C"), 0.5);
        assert_eq!(model.conditional("<s>", "A"), 1.0);
        assert_eq!(model.conditional("B", "A"), 0.0);
    }

    #[test]
    fn bigram_conditionals_sum_to_one_per_context() {
        let corpus = tokenize("ČOVJEK PUŠI LULU. DIM SE DIŽE. ČOVJEK GLEDA DIM.");
        let model = WordBigramModel::from_corpus(&corpus).unwrap();
        for (prev, row) in &model.counts {
            let sum: f64 = row.keys().map(|w| model.conditional(prev, w)).sum();
            assert!((sum - 1.0).abs() <= 1e-9, "context {prev:?} sums to {sum}");
        }
    }

    #[test]
    fn bigram_surprisal_is_finite_for_unseen_pairs() {
        let model = WordBigramModel::from_corpus(&tokenize("A B.")).unwrap();
        assert!(model.surprisal("A", "NIKAD").is_finite());
        assert!(model.surprisal("NIKAD", "A").is_finite());
    }

    #[test]
    fn empty_corpus_has_no_bigram_model() {
        assert!(matches!(
            WordBigramModel::from_corpus(&[]),
            Err(Error::NoSymbols)
        ));
    }

    #[test]
    fn identical_sentences_align_to_the_identity() {
        let corpus = tokenize("ČOVJEK PUŠI LULU. ČOVJEK GLEDA MORE.");
        let model = WordBigramModel::from_corpus(&corpus).unwrap();
        let s = Sentence::from_words(&["ČOVJEK", "PUŠI", "LULU"]);
        let alignment = align_by_bigrams(&s, &s, &model, &model);
        assert_eq!(alignment.pairs(), [(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn two_by_two_picks_the_cheaper_full_pairing() {
        let costs = [[0.1, 5.0], [5.0, 0.1]];
        let src = Sentence::from_words(&["X", "Y"]);
        let tgt = Sentence::from_words(&["P", "Q"]);
        let alignment = brute_force_align(&src, &tgt, |i, j| costs[i][j]).unwrap();
        assert_eq!(alignment.pairs(), [(0, 0), (1, 1)]);
        let crossed = brute_force_align(&src, &tgt, |i, j| costs[1 - i][j]).unwrap();
        assert_eq!(crossed.pairs(), [(0, 1), (1, 0)]);
    }

    #[test]
    fn exhaustive_alignment_matches_brute_force_cost() {
        let src_corpus = tokenize("ČOVJEK PUŠI LULU. ČOVJEK GLEDA MORE. DIM SE DIŽE.");
        let tgt_corpus = tokenize("MAN SMOKES PIPE. MAN WATCHES SEA. SMOKE RISES UP.");
        let src_model = WordBigramModel::from_corpus(&src_corpus).unwrap();
        let tgt_model = WordBigramModel::from_corpus(&tgt_corpus).unwrap();
        for (s, t) in [
            ("ČOVJEK PUŠI LULU.", "MAN SMOKES PIPE."),
            ("DIM SE DIŽE.", "SMOKE RISES."),
            ("ČOVJEK GLEDA.", "MAN WATCHES SEA UP."),
        ] {
            let src = &tokenize(s)[0];
            let tgt = &tokenize(t)[0];
            let s_src = src_model.token_surprisals(src);
            let s_tgt = tgt_model.token_surprisals(tgt);
            let cost = |i: usize, j: usize| (s_src[i] - s_tgt[j]).abs();
            let fast = align_by_bigrams(src, tgt, &src_model, &tgt_model);
            let slow = brute_force_align(src, tgt, cost).unwrap();
            assert_eq!(alignment_cost(&fast, cost), alignment_cost(&slow, cost));
            assert_eq!(fast.pairs(), slow.pairs());
        }
    }

    #[test]
    fn long_sentences_fall_back_to_greedy() {
        let words: Vec<String> = (0..10).map(|i| format!("W{i}")).collect();
        let text = words.join(" ") + ".";
        let corpus = tokenize(&text);
        let model = WordBigramModel::from_corpus(&corpus).unwrap();
        let s = &corpus[0];
        let first = align_by_bigrams(s, s, &model, &model);
        assert!(first.is_partial_bijection());
        assert_eq!(first.pairs().len(), 10);
        assert_eq!(align_by_bigrams(s, s, &model, &model), first);
    }

    #[test]
    fn brute_force_refuses_long_pairs() {
        let words: Vec<String> = (0..9).map(|i| format!("W{i}")).collect();
        let s = Sentence::from_words(&words);
        assert!(matches!(
            brute_force_align(&s, &s, |_, _| 0.0),
            Err(Error::AlignmentTooLong(9, EXHAUSTIVE_LIMIT))
        ));
    }

    #[test]
    fn empty_sides_align_to_nothing() {
        let empty = Sentence::from_words::<&str>(&[]);
        let full = Sentence::from_words(&["A", "B"]);
        let alignment = brute_force_align(&empty, &full, |_, _| 1.0).unwrap();
        assert!(alignment.pairs().is_empty());
        assert_eq!(alignment.unaligned_tgt(), [0, 1]);
    }

    #[test]
    fn pharaoh_notation_lists_pairs_in_order() {
        let alignment = Alignment::new(vec![(1, 2), (0, 0)], 3, 3);
        assert_eq!(alignment.pharaoh(), "0-0 1-2");
        assert_eq!(alignment.unaligned_src(), [2]);
    }

    #[test]
    fn surprisal_tables_from_real_counts_stay_positive() {
        let corpus = tokenize("ČOVJEK PUŠI LULU. DIM SE DIŽE U NEBO.");
        let table = build_surprisal_table(&count_words(&corpus)).unwrap();
        for sentence in &corpus {
            for token in &sentence.tokens {
                assert!(table.surprisal(&token.surface) > 0.0);
            }
        }
    }
}
