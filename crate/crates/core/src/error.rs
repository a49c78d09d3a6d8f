//! Crate-wide error type.
//!
//! Every fallible operation in the pipeline returns [`Error`]. Errors that
//! surface from a multi-stage run are wrapped with the name of the stage
//! that produced them (see [`Error::stage`]) so a caller can report *where*
//! a translation fell over, not just why.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A corpus contained no symbols at all (empty or whitespace-only).
    #[error("corpus contains no symbols")]
    NoSymbols,

    /// A probability table did not sum to 1 within tolerance.
    #[error("probabilities sum to {sum}, expected 1 (tolerance {tolerance})")]
    BadDistribution { sum: f64, tolerance: f64 },

    /// An n-gram order outside the supported range was requested.
    #[error("unsupported n-gram order {0}, expected 2 or 3")]
    BadNgramOrder(usize),

    /// Input text contained a reserved word-boundary sentinel.
    #[error("reserved sentinel {0:?} is not allowed in input text")]
    ReservedSentinel(char),

    /// A symbol missing from the active code book was encoded.
    #[error("symbol {0:?} is not in the code book")]
    UnknownSymbol(char),

    /// A bitstring contained something other than '0' or '1'.
    #[error("invalid bit {0:?} in bitstring")]
    InvalidBit(char),

    /// A bitstring ended partway through a codeword.
    #[error("bitstring ends with undecodable remainder {0:?}")]
    TrailingBits(String),

    /// A word-level operation was asked about a word outside the vocabulary.
    #[error("word {0:?} is not in the active vocabulary")]
    NotInVocabulary(String),

    /// Suffix induction was called with a support threshold of zero.
    #[error("minimum support must be at least 1, got {0}")]
    BadMinSupport(usize),

    /// An exception-table entry whose lemma cannot be reconciled with its
    /// surface form, even after undoing the consonant voice change.
    #[error("exception entry {surface:?} -> {lemma:?} is not prefix-compatible")]
    BadException { surface: String, lemma: String },

    /// A malformed line in one of the TSV table formats.
    #[error("malformed table line {line}: {reason}")]
    BadTableLine { line: usize, reason: String },

    /// A grammatical category expression that does not parse.
    #[error("malformed category expression {0:?}")]
    BadCategory(String),

    /// A source token whose lemma has no thesaurus entry.
    #[error("out-of-vocabulary lemma {lemma:?} for token {token:?}")]
    OovLemma { token: String, lemma: String },

    /// No meaning assignment for the token passed the sentence-level
    /// grammar check. Carries the candidates that were considered.
    #[error("no grammatical reading for token {token:?} (candidates tried: {candidates})")]
    NoParse { token: String, candidates: String },

    /// A meaning tag that the target lexicon does not cover.
    #[error("meaning tag {0:?} has no target-lexicon entry")]
    MissingTargetEntry(String),

    /// An alignment routine was given a pair too long for exhaustive search.
    #[error("sentence pair too long for exhaustive alignment ({0} tokens, limit {1})")]
    AlignmentTooLong(usize, usize),

    /// Surprisal statistics were requested from an empty frequency table.
    #[error("frequency table is empty")]
    EmptyFrequencyTable,

    /// Thesaurus (or other JSON) that failed to parse or validate; the
    /// underlying error carries line and column.
    #[error("thesaurus error: {0}")]
    Thesaurus(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// An error from a named pipeline stage.
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wraps `self` with the name of the pipeline stage it came from.
    /// Already-wrapped errors keep their original (innermost) stage.
    pub fn stage(self, stage: &'static str) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            other => Error::Stage {
                stage,
                source: Box::new(other),
            },
        }
    }

    /// The stage name attached via [`Error::stage`], if any.
    pub fn stage_name(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}
