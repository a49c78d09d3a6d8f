//! `prevod` — batch command line for the translation pipeline.
//!
//! Each subcommand exposes one pipeline stage over files or standard
//! input/output; `eval` chains all of them over a configured corpus and
//! reports per-stage statistics as line-oriented JSON. An INI-style
//! `--config` file can supply any path or knob; explicit flags win.
//!
//! Exit codes: 0 success, 1 stage error (diagnostic names the stage on
//! standard error), 2 usage error. A consumer closing the output pipe
//! early (e.g. `prevod ... | head`) ends the run quietly with code 0.

mod config;
mod eval;

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prevod_core::aligner::{
    align_by_bigrams, align_by_entropy, brute_force_align, build_surprisal_table, Alignment,
    WordBigramModel,
};
use prevod_core::codec::{build_codebook, decode, encode, entropy, letter_frequencies, CodeBook};
use prevod_core::corpus::{count_words, tokenize, truncate_vocabulary, Sentence};
use prevod_core::lexicon::Thesaurus;
use prevod_core::morphology::{
    build_inverse_dictionary, induce_suffixes_up_to, lemmatize, suffix_rules_from_tsv,
    suffix_rules_to_tsv, LemmaTable, SuffixRule, MAX_SUFFIX_LEN,
};
use prevod_core::translator::Pipeline;
use prevod_core::{Error, Result};

use config::{AlignMethod, PipelineConfig};

#[derive(Parser)]
#[command(
    name = "prevod",
    version,
    about = "Dictionary-and-entropy machine translation pipeline",
    propagate_version = true
)]
struct Cli {
    /// INI config file supplying defaults; explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word frequency table (word<TAB>count) from text.
    Freq {
        /// Input text file; standard input when omitted.
        input: Option<PathBuf>,
    },
    /// Letter-distribution entropy of text, in bits per symbol.
    Entropy { input: Option<PathBuf> },
    /// Prefix-free letter code book (symbol<TAB>bits) from text.
    Codebook { input: Option<PathBuf> },
    /// Encode words (one per line) into bitstrings with a code book.
    Encode {
        /// Code book TSV produced by `codebook`.
        #[arg(long, value_name = "FILE")]
        codebook: PathBuf,
        input: Option<PathBuf>,
    },
    /// Decode bitstrings (one per line) back into words.
    Decode {
        #[arg(long, value_name = "FILE")]
        codebook: PathBuf,
        input: Option<PathBuf>,
    },
    /// Word list of the text sorted by reversed spelling.
    Invdict { input: Option<PathBuf> },
    /// Induce suffix rules (suffix<TAB>support) from text.
    Suffixes {
        /// Keep suffixes attested in at least this many words.
        #[arg(long, value_name = "N")]
        min_support: Option<usize>,
        /// Longest suffix length to consider.
        #[arg(long, value_name = "N", default_value_t = MAX_SUFFIX_LEN)]
        max_len: usize,
        /// Rank cutoff for the vocabulary the rules are induced from.
        #[arg(long, value_name = "N")]
        vocab_cap: Option<usize>,
        input: Option<PathBuf>,
    },
    /// Lemmatize text: one surface<TAB>lemma line per token.
    Lemmatize {
        /// Suffix rules TSV.
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        /// Exception table TSV (surface<TAB>lemma).
        #[arg(long, value_name = "FILE")]
        exceptions: Option<PathBuf>,
        input: Option<PathBuf>,
    },
    /// Translate text; one target sentence per line.
    Translate {
        /// Thesaurus and target lexicon (JSON).
        #[arg(long, value_name = "FILE")]
        thesaurus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        exceptions: Option<PathBuf>,
        /// Round-trip every token through the entropy codec first.
        #[arg(long)]
        codec: bool,
        /// Emit one JSON trace object per sentence on standard error.
        #[arg(long)]
        trace: bool,
        input: Option<PathBuf>,
    },
    /// Align sentence pairs (source<TAB>target per line) in i-j notation.
    Align {
        /// entropy, bigram, or oracle.
        #[arg(long, value_name = "METHOD")]
        method: Option<String>,
        /// Corpus for the source-side statistics; the pair file's own
        /// source sides when omitted.
        #[arg(long, value_name = "FILE")]
        source_corpus: Option<PathBuf>,
        /// Corpus for the target-side statistics; the pair file's own
        /// target sides when omitted.
        #[arg(long, value_name = "FILE")]
        target_corpus: Option<PathBuf>,
        input: Option<PathBuf>,
    },
    /// Run every stage over the configured corpora; line-oriented JSON.
    Eval {
        #[arg(long, value_name = "FILE")]
        corpus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        target_corpus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        thesaurus: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        exceptions: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        rules: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        pairs: Option<PathBuf>,
        #[arg(long, value_name = "N")]
        vocab_cap: Option<usize>,
        #[arg(long, value_name = "N")]
        min_support: Option<usize>,
        /// Seed for the randomized alignment stress pairs.
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
        #[arg(long, value_name = "BOOL")]
        codec: Option<bool>,
        #[arg(long, value_name = "METHOD")]
        align_method: Option<String>,
    },
}

fn named_io(path: &Path, err: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(
        err.kind(),
        format!("{}: {err}", path.display()),
    ))
}

/// Reads the positional input file, or standard input when none is given.
/// Failures are attributed to `stage`.
fn read_input(path: Option<&Path>, stage: &'static str) -> Result<String> {
    let result = match path {
        Some(path) => fs::read_to_string(path).map_err(|e| named_io(path, e)),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map(|_| text)
                .map_err(Error::from)
        }
    };
    result.map_err(|e| e.stage(stage))
}

fn read_file(path: &Path, stage: &'static str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| named_io(path, e).stage(stage))
}

fn load_config(path: Option<&Path>) -> Result<PipelineConfig> {
    match path {
        Some(path) => PipelineConfig::from_file(path),
        None => Ok(PipelineConfig::default()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Error::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            let _ = writeln!(std::io::stderr(), "error: {err}");
            ExitCode::FAILURE
        }
    }
}

/// True when the error is ultimately a closed standard stream: the
/// consumer stopped reading, so there is nothing left to report.
fn is_broken_pipe(err: &Error) -> bool {
    match err {
        Error::Io(e) => e.kind() == std::io::ErrorKind::BrokenPipe,
        Error::Stage { source, .. } => is_broken_pipe(source),
        _ => false,
    }
}

fn run(cli: Cli, out: &mut impl Write) -> Result<()> {
    let config = load_config(cli.config.as_deref())?;
    config.validate()?;
    match cli.command {
        Command::Freq { input } => {
            let corpus = tokenize(&read_input(input.as_deref(), "corpus")?);
            write!(out, "{}", count_words(&corpus).to_tsv())?;
            Ok(())
        }
        Command::Entropy { input } => {
            let corpus = tokenize(&read_input(input.as_deref(), "corpus")?);
            let dist = letter_frequencies(&corpus).map_err(|e| e.stage("codec"))?;
            writeln!(out, "{:.9}", entropy(&dist))?;
            Ok(())
        }
        Command::Codebook { input } => {
            let corpus = tokenize(&read_input(input.as_deref(), "corpus")?);
            let dist = letter_frequencies(&corpus).map_err(|e| e.stage("codec"))?;
            let book = build_codebook(&dist).map_err(|e| e.stage("codec"))?;
            write!(out, "{}", book.to_tsv())?;
            Ok(())
        }
        Command::Encode { codebook, input } => {
            let book = load_codebook(&codebook)?;
            for line in read_input(input.as_deref(), "codec")?.lines() {
                writeln!(
                    out,
                    "{}",
                    encode(line, &book).map_err(|e| e.stage("codec"))?
                )?;
            }
            Ok(())
        }
        Command::Decode { codebook, input } => {
            let book = load_codebook(&codebook)?;
            for line in read_input(input.as_deref(), "codec")?.lines() {
                writeln!(
                    out,
                    "{}",
                    decode(line, &book).map_err(|e| e.stage("codec"))?
                )?;
            }
            Ok(())
        }
        Command::Invdict { input } => {
            let corpus = tokenize(&read_input(input.as_deref(), "corpus")?);
            let vocab = truncate_vocabulary(&count_words(&corpus), usize::MAX);
            write!(out, "{}", build_inverse_dictionary(&vocab).to_text())?;
            Ok(())
        }
        Command::Suffixes {
            min_support,
            max_len,
            vocab_cap,
            input,
        } => {
            let corpus = tokenize(&read_input(input.as_deref(), "corpus")?);
            let cap = vocab_cap.unwrap_or(config.vocab_cap);
            let vocab = truncate_vocabulary(&count_words(&corpus), cap);
            let dict = build_inverse_dictionary(&vocab);
            let support = min_support.unwrap_or(config.min_support);
            let rules = induce_suffixes_up_to(&dict, support, max_len)
                .map_err(|e| e.stage("morphology"))?;
            write!(out, "{}", suffix_rules_to_tsv(&rules))?;
            Ok(())
        }
        Command::Lemmatize {
            rules,
            exceptions,
            input,
        } => {
            let rules = load_rules(rules.as_deref().or(config.rules.as_deref()))?;
            let lemmas = load_exceptions(exceptions.as_deref().or(config.exceptions.as_deref()))?;
            for sentence in &tokenize(&read_input(input.as_deref(), "corpus")?) {
                for token in &sentence.tokens {
                    writeln!(
                        out,
                        "{}\t{}",
                        token.surface,
                        lemmatize(&token.surface, &rules, &lemmas)
                    )?;
                }
            }
            Ok(())
        }
        Command::Translate {
            thesaurus,
            rules,
            exceptions,
            codec,
            trace,
            input,
        } => {
            let thesaurus_path = thesaurus
                .or_else(|| config.thesaurus.clone())
                .ok_or_else(|| no_input("thesaurus", "lexicon"))?;
            let thesaurus = Thesaurus::from_json(&read_file(&thesaurus_path, "lexicon")?)
                .map_err(|e| e.stage("lexicon"))?;
            let rules = load_rules(rules.as_deref().or(config.rules.as_deref()))?;
            let lemmas = load_exceptions(exceptions.as_deref().or(config.exceptions.as_deref()))?;
            let corpus = tokenize(&read_input(input.as_deref(), "corpus")?);
            let codebook = if codec || config.codec {
                let dist = letter_frequencies(&corpus).map_err(|e| e.stage("codec"))?;
                Some(build_codebook(&dist).map_err(|e| e.stage("codec"))?)
            } else {
                None
            };
            let pipeline = Pipeline {
                rules: &rules,
                lemmas: &lemmas,
                thesaurus: &thesaurus,
                codebook: codebook.as_ref(),
            };
            let trace = trace || config.trace;
            for sentence in &corpus {
                let result = pipeline.translate(sentence)?;
                if trace {
                    let json = serde_json::to_string(&result).map_err(Error::from)?;
                    writeln!(std::io::stderr(), "{json}")?;
                }
                writeln!(out, "{}", result.target)?;
            }
            Ok(())
        }
        Command::Align {
            method,
            source_corpus,
            target_corpus,
            input,
        } => {
            let method = match method {
                Some(name) => AlignMethod::parse(&name).map_err(|e| e.stage("aligner"))?,
                None => config.align_method,
            };
            let pairs_path = input.or_else(|| config.pairs.clone());
            let pairs = parse_pairs(&read_input(pairs_path.as_deref(), "aligner")?)?;
            let source_corpus = source_corpus.or_else(|| config.corpus.clone());
            let target_corpus = target_corpus.or_else(|| config.target_corpus.clone());
            run_align(
                method,
                &pairs,
                source_corpus.as_deref(),
                target_corpus.as_deref(),
                out,
            )
        }
        Command::Eval {
            corpus,
            target_corpus,
            thesaurus,
            exceptions,
            rules,
            pairs,
            vocab_cap,
            min_support,
            seed,
            codec,
            align_method,
        } => {
            let mut config = config;
            merge(&mut config.corpus, corpus);
            merge(&mut config.target_corpus, target_corpus);
            merge(&mut config.thesaurus, thesaurus);
            merge(&mut config.exceptions, exceptions);
            merge(&mut config.rules, rules);
            merge(&mut config.pairs, pairs);
            if let Some(cap) = vocab_cap {
                config.vocab_cap = cap;
            }
            if let Some(support) = min_support {
                config.min_support = support;
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            if let Some(codec) = codec {
                config.codec = codec;
            }
            if let Some(name) = align_method {
                config.align_method = AlignMethod::parse(&name)?;
            }
            let report = eval::evaluate(&config);
            write!(out, "{}", report.text())?;
            if report.complete() {
                Ok(())
            } else {
                Err(report.failure.expect("incomplete report carries its error"))
            }
        }
    }
}

fn no_input(what: &str, stage: &'static str) -> Error {
    Error::Io(std::io::Error::new(
        std::io::ErrorKind::InvalidInput,
        format!("no {what} configured (flag or config file)"),
    ))
    .stage(stage)
}

fn merge(slot: &mut Option<PathBuf>, flag: Option<PathBuf>) {
    if flag.is_some() {
        *slot = flag;
    }
}

fn load_codebook(path: &Path) -> Result<CodeBook> {
    CodeBook::from_tsv(&read_file(path, "codec")?).map_err(|e| e.stage("codec"))
}

fn load_rules(path: Option<&Path>) -> Result<Vec<SuffixRule>> {
    match path {
        Some(path) => suffix_rules_from_tsv(&read_file(path, "morphology")?)
            .map_err(|e| e.stage("morphology")),
        None => Ok(Vec::new()),
    }
}

fn load_exceptions(path: Option<&Path>) -> Result<LemmaTable> {
    match path {
        Some(path) => {
            LemmaTable::from_tsv(&read_file(path, "morphology")?).map_err(|e| e.stage("morphology"))
        }
        None => Ok(LemmaTable::new()),
    }
}

fn parse_pairs(text: &str) -> Result<Vec<(Sentence, Sentence)>> {
    let empty = || Sentence::from_words::<&str>(&[]);
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let (src, tgt) = line
            .split_once('\t')
            .ok_or(Error::BadTableLine {
                line: idx + 1,
                reason: "expected source<TAB>target".to_string(),
            })
            .map_err(|e| e.stage("aligner"))?;
        pairs.push((
            tokenize(src).into_iter().next().unwrap_or_else(empty),
            tokenize(tgt).into_iter().next().unwrap_or_else(empty),
        ));
    }
    Ok(pairs)
}

/// Builds side statistics and prints one alignment line per pair.
fn run_align(
    method: AlignMethod,
    pairs: &[(Sentence, Sentence)],
    source_corpus: Option<&Path>,
    target_corpus: Option<&Path>,
    out: &mut impl Write,
) -> Result<()> {
    if pairs.is_empty() {
        return Ok(());
    }
    let side = |path: Option<&Path>, own: Vec<Sentence>| -> Result<Vec<Sentence>> {
        match path {
            Some(path) => Ok(tokenize(&read_file(path, "aligner")?)),
            None => Ok(own),
        }
    };
    let src_corpus = side(
        source_corpus,
        pairs.iter().map(|(s, _)| s.clone()).collect(),
    )?;
    let tgt_corpus = side(
        target_corpus,
        pairs.iter().map(|(_, t)| t.clone()).collect(),
    )?;

    let staged = |e: Error| e.stage("aligner");
    let alignments: Vec<Alignment> = match method {
        AlignMethod::Entropy => {
            let src_table = build_surprisal_table(&count_words(&src_corpus)).map_err(staged)?;
            let tgt_table = build_surprisal_table(&count_words(&tgt_corpus)).map_err(staged)?;
            pairs
                .iter()
                .map(|(src, tgt)| align_by_entropy(src, tgt, &src_table, &tgt_table))
                .collect()
        }
        AlignMethod::Bigram | AlignMethod::Oracle => {
            let src_model = WordBigramModel::from_corpus(&src_corpus).map_err(staged)?;
            let tgt_model = WordBigramModel::from_corpus(&tgt_corpus).map_err(staged)?;
            let mut alignments = Vec::with_capacity(pairs.len());
            for (src, tgt) in pairs {
                let alignment = if method == AlignMethod::Bigram {
                    align_by_bigrams(src, tgt, &src_model, &tgt_model)
                } else {
                    let s_src = src_model.token_surprisals(src);
                    let s_tgt = tgt_model.token_surprisals(tgt);
                    brute_force_align(src, tgt, |i, j| (s_src[i] - s_tgt[j]).abs())
                        .map_err(staged)?
                };
                alignments.push(alignment);
            }
            alignments
        }
    };
    for alignment in alignments {
        writeln!(out, "{}", alignment.pharaoh())?;
    }
    Ok(())
}
