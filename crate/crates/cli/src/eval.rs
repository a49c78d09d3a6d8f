//! The `eval` harness: run every pipeline stage over the configured
//! corpora and emit one JSON object per stage, one per line.
//!
//! The report is reproducible: identical configuration and inputs produce
//! byte-identical output. The run timestamp honors the `SOURCE_DATE_EPOCH`
//! environment variable (seconds since the Unix epoch) so reports can be
//! pinned; without it the wall clock is used. A stage failure stops the
//! run, and the partial report's summary line carries `"complete": false`
//! and the failed stage's name.

use std::fs;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use prevod_core::aligner::{
    align_by_bigrams, align_by_entropy, alignment_cost, brute_force_align, build_surprisal_table,
    WordBigramModel, EXHAUSTIVE_LIMIT,
};
use prevod_core::codec::{build_codebook, entropy, letter_frequencies};
use prevod_core::corpus::{count_words, tokenize, truncate_vocabulary, Sentence};
use prevod_core::lexicon::{load_thesaurus, Thesaurus};
use prevod_core::morphology::{
    build_inverse_dictionary, induce_suffixes, lemmatize, suffix_rules_from_tsv, LemmaTable,
    SuffixRule,
};
use prevod_core::translator::Pipeline;
use prevod_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::PipelineConfig;

/// Random sentence pairs generated per run for the oracle-agreement
/// statistic, on top of any configured fixture pairs.
const RANDOM_PAIRS: usize = 50;

/// A finished (possibly partial) evaluation.
pub struct EvalReport {
    /// One JSON object per line; the summary line is always last.
    pub lines: Vec<String>,
    /// The stage-tagged error that stopped the run, if any.
    pub failure: Option<Error>,
}

impl EvalReport {
    pub fn complete(&self) -> bool {
        self.failure.is_none()
    }

    /// The report text: every line, newline-terminated.
    pub fn text(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}

fn stage_error(stage: &'static str, reason: String) -> Error {
    Error::Io(std::io::Error::new(
        std::io::ErrorKind::InvalidInput,
        reason,
    ))
    .stage(stage)
}

fn read_file(path: &Path, stage: &'static str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| stage_error(stage, format!("{}: {e}", path.display())))
}

fn timestamp() -> u64 {
    if let Ok(pinned) = std::env::var("SOURCE_DATE_EPOCH") {
        if let Ok(seconds) = pinned.parse() {
            return seconds;
        }
    }
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Carries the artifacts each stage hands to the next.
struct StageState {
    corpus: Vec<Sentence>,
    target_corpus: Option<Vec<Sentence>>,
    rules: Vec<SuffixRule>,
    lemmas: LemmaTable,
    thesaurus: Option<Thesaurus>,
}

/// Runs every stage and collects the line-oriented report. Stage failures
/// are recorded, not propagated, so callers always get a report.
pub fn evaluate(config: &PipelineConfig) -> EvalReport {
    let mut lines = Vec::new();
    let mut failure = None;
    let mut failed_stage = "";

    let mut state = StageState {
        corpus: Vec::new(),
        target_corpus: None,
        rules: Vec::new(),
        lemmas: LemmaTable::new(),
        thesaurus: None,
    };

    let stages: [(&'static str, StageFn); 6] = [
        ("corpus", stage_corpus),
        ("codec", stage_codec),
        ("morphology", stage_morphology),
        ("lexicon", stage_lexicon),
        ("translator", stage_translator),
        ("aligner", stage_aligner),
    ];
    for (name, stage) in stages {
        match stage(config, &mut state) {
            Ok(value) => lines.push(value.to_string()),
            Err(err) => {
                failed_stage = name;
                failure = Some(err.stage(name));
                break;
            }
        }
    }

    let summary = match &failure {
        None => json!({
            "stage": "summary",
            "config_hash": config.hash(),
            "timestamp": timestamp(),
            "complete": true,
        }),
        Some(err) => json!({
            "stage": "summary",
            "config_hash": config.hash(),
            "timestamp": timestamp(),
            "complete": false,
            "failed_stage": failed_stage,
            "error": err.to_string(),
        }),
    };
    lines.push(summary.to_string());
    EvalReport { lines, failure }
}

type StageFn = fn(&PipelineConfig, &mut StageState) -> Result<serde_json::Value>;

fn stage_corpus(config: &PipelineConfig, state: &mut StageState) -> Result<serde_json::Value> {
    if config.vocab_cap == 0 {
        return Err(stage_error(
            "corpus",
            "vocab_cap must be at least 1".to_string(),
        ));
    }
    let path = config
        .corpus
        .as_deref()
        .ok_or_else(|| stage_error("corpus", "no corpus configured".to_string()))?;
    state.corpus = tokenize(&read_file(path, "corpus")?);
    if let Some(target) = config.target_corpus.as_deref() {
        state.target_corpus = Some(tokenize(&read_file(target, "corpus")?));
    }
    let freq = count_words(&state.corpus);
    let capped = truncate_vocabulary(&freq, config.vocab_cap);
    Ok(json!({
        "stage": "corpus",
        "sentences": state.corpus.len(),
        "tokens": freq.total(),
        "vocab_size": freq.distinct(),
        "vocab_cap": config.vocab_cap,
        "capped_vocab_size": capped.len(),
    }))
}

fn stage_codec(config: &PipelineConfig, state: &mut StageState) -> Result<serde_json::Value> {
    let dist = letter_frequencies(&state.corpus)?;
    let codebook = build_codebook(&dist)?;
    let entropy_bits = entropy(&dist);
    let mean_length = codebook.expected_length(&dist);
    if !(entropy_bits - 1e-9 <= mean_length && mean_length < entropy_bits + 1.0) {
        return Err(stage_error(
            "codec",
            format!("code length {mean_length} outside [H, H+1) for H = {entropy_bits}"),
        ));
    }
    Ok(json!({
        "stage": "codec",
        "enabled": config.codec,
        "distinct_symbols": dist.symbols().count(),
        "entropy_bits_per_symbol": entropy_bits,
        "mean_code_length": mean_length,
    }))
}

fn stage_morphology(config: &PipelineConfig, state: &mut StageState) -> Result<serde_json::Value> {
    state.rules = match config.rules.as_deref() {
        Some(path) => suffix_rules_from_tsv(&read_file(path, "morphology")?)?,
        None => {
            let freq = count_words(&state.corpus);
            let vocab = truncate_vocabulary(&freq, config.vocab_cap);
            let dict = build_inverse_dictionary(&vocab);
            induce_suffixes(&dict, config.min_support)?
        }
    };
    state.lemmas = match config.exceptions.as_deref() {
        Some(path) => LemmaTable::from_tsv(&read_file(path, "morphology")?)?,
        None => LemmaTable::new(),
    };
    let mut exception_hits = 0u64;
    let mut lemmas = std::collections::BTreeSet::new();
    for sentence in &state.corpus {
        for token in &sentence.tokens {
            if state.lemmas.is_exception(&token.surface) {
                exception_hits += 1;
            }
            lemmas.insert(lemmatize(&token.surface, &state.rules, &state.lemmas));
        }
    }
    Ok(json!({
        "stage": "morphology",
        "suffix_rules": state.rules.len(),
        "exception_hits": exception_hits,
        "distinct_lemmas": lemmas.len(),
    }))
}

fn stage_lexicon(config: &PipelineConfig, state: &mut StageState) -> Result<serde_json::Value> {
    let path = config
        .thesaurus
        .as_deref()
        .ok_or_else(|| stage_error("lexicon", "no thesaurus configured".to_string()))?;
    if !path.is_file() {
        return Err(stage_error(
            "lexicon",
            format!("thesaurus file {} does not exist", path.display()),
        ));
    }
    let thesaurus = load_thesaurus(path)?;
    let mut tokens = 0u64;
    let mut oov = 0u64;
    for sentence in &state.corpus {
        for token in &sentence.tokens {
            tokens += 1;
            let lemma = lemmatize(&token.surface, &state.rules, &state.lemmas);
            if !thesaurus.contains(&lemma) {
                oov += 1;
            }
        }
    }
    let oov_rate = if tokens == 0 {
        0.0
    } else {
        oov as f64 / tokens as f64
    };
    let entries = thesaurus.entries().len();
    state.thesaurus = Some(thesaurus);
    Ok(json!({
        "stage": "lexicon",
        "entries": entries,
        "oov_rate": oov_rate,
    }))
}

fn stage_translator(config: &PipelineConfig, state: &mut StageState) -> Result<serde_json::Value> {
    let thesaurus = state.thesaurus.as_ref().expect("lexicon stage ran first");
    let dist = letter_frequencies(&state.corpus)?;
    let codebook = if config.codec {
        Some(build_codebook(&dist)?)
    } else {
        None
    };
    let pipeline = Pipeline {
        rules: &state.rules,
        lemmas: &state.lemmas,
        thesaurus,
        codebook: codebook.as_ref(),
    };
    let mut translated = 0usize;
    let mut failures = 0usize;
    for sentence in &state.corpus {
        match pipeline.translate(sentence) {
            Ok(_) => translated += 1,
            Err(_) => failures += 1,
        }
    }
    Ok(json!({
        "stage": "translator",
        "codec_roundtrip": config.codec,
        "sentences": state.corpus.len(),
        "translated": translated,
        "failures": failures,
    }))
}

/// Draws a deterministic random sentence of 1–6 words from `vocab`.
fn random_sentence(vocab: &[String], rng: &mut ChaCha8Rng) -> Sentence {
    let length = rng.gen_range(1..=6);
    let words: Vec<&str> = (0..length)
        .map(|_| vocab[rng.gen_range(0..vocab.len())].as_str())
        .collect();
    Sentence::from_words(&words)
}

fn stage_aligner(config: &PipelineConfig, state: &mut StageState) -> Result<serde_json::Value> {
    let src_corpus = &state.corpus;
    let tgt_corpus = state.target_corpus.as_ref().unwrap_or(src_corpus);
    let src_model = WordBigramModel::from_corpus(src_corpus)?;
    let tgt_model = WordBigramModel::from_corpus(tgt_corpus)?;
    let src_table = build_surprisal_table(&count_words(src_corpus))?;
    let tgt_table = build_surprisal_table(&count_words(tgt_corpus))?;

    let mut pairs: Vec<(Sentence, Sentence)> = Vec::new();
    if let Some(path) = config.pairs.as_deref() {
        for (idx, line) in read_file(path, "aligner")?.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (src, tgt) = line.split_once('\t').ok_or(Error::BadTableLine {
                line: idx + 1,
                reason: "expected source<TAB>target".to_string(),
            })?;
            let empty = || Sentence::from_words::<&str>(&[]);
            let src = tokenize(src).into_iter().next().unwrap_or_else(empty);
            let tgt = tokenize(tgt).into_iter().next().unwrap_or_else(empty);
            pairs.push((src, tgt));
        }
    }
    let fixture_pairs = pairs.len();

    let src_vocab: Vec<String> = count_words(src_corpus)
        .iter()
        .map(|(w, _)| w.to_string())
        .collect();
    let tgt_vocab: Vec<String> = count_words(tgt_corpus)
        .iter()
        .map(|(w, _)| w.to_string())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..RANDOM_PAIRS {
        let src = random_sentence(&src_vocab, &mut rng);
        let tgt = random_sentence(&tgt_vocab, &mut rng);
        pairs.push((src, tgt));
    }

    let mut compared = 0usize;
    let mut agreed = 0usize;
    let mut bijective = true;
    for (src, tgt) in &pairs {
        let entropy_alignment = align_by_entropy(src, tgt, &src_table, &tgt_table);
        bijective &= entropy_alignment.is_partial_bijection();
        if src.len().min(tgt.len()) > EXHAUSTIVE_LIMIT {
            continue;
        }
        let s_src = src_model.token_surprisals(src);
        let s_tgt = tgt_model.token_surprisals(tgt);
        let cost = |i: usize, j: usize| (s_src[i] - s_tgt[j]).abs();
        let fast = align_by_bigrams(src, tgt, &src_model, &tgt_model);
        let slow = brute_force_align(src, tgt, cost)?;
        compared += 1;
        if fast.pairs() == slow.pairs()
            && alignment_cost(&fast, cost) == alignment_cost(&slow, cost)
        {
            agreed += 1;
        }
    }
    let rate = if compared == 0 {
        1.0
    } else {
        agreed as f64 / compared as f64
    };
    debug_assert!((0.0..=1.0).contains(&rate));
    Ok(json!({
        "stage": "aligner",
        "method": config.align_method.as_str(),
        "fixture_pairs": fixture_pairs,
        "random_pairs": RANDOM_PAIRS,
        "compared": compared,
        "oracle_agreement_rate": rate,
        "entropy_bijection_ok": bijective,
    }))
}
